// Copyright 2026 The qsbc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Report builders behind the qsbc command line tool. Every subcommand turns
// an ExperimentConfig into a Report of rows; grid point i draws its
// randomness from mix_seed(seed, i) so reports are reproducible.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qsbc/attack.hpp"
#include "qsbc/concealing.hpp"
#include "qsbc/ecc.hpp"
#include "qsbc/protocols.hpp"
#include "qsbc/transcript_io.hpp"

#ifndef QSBC_VERSION
#define QSBC_VERSION "0.0.0"
#endif

namespace qsbc::cli {

using Json = nlohmann::ordered_json;

inline constexpr double kConcealTolerance = 1e-7;

enum class Format { Json, Csv };

struct ExperimentConfig {
    std::string subcommand;
    std::vector<ProtocolId> protocols{ProtocolId::P1};
    std::vector<std::size_t> ns{1};
    std::vector<std::size_t> ms{1};
    std::vector<double> alphas{M_PI / 4};
    double loss = 0.0;
    double flip = 0.0;
    std::optional<double> error_allowance;
    std::string code_path;
    std::size_t trials = 1000;
    std::uint64_t seed = 1;
    std::vector<double> p_s{0.0, 0.5, 1.0};
    std::vector<double> p_ce{0.05};
    std::vector<double> p_cv{0.5};
    std::optional<std::size_t> resource_n;
    Format format = Format::Json;
};

struct Report {
    Json config;
    std::vector<Json> rows;
    int exit_code = 0;
};

/// Rounds to 12 significant digits; the JSON writer then prints the shortest
/// form of the rounded value.
inline Json number(double x) {
    if (!std::isfinite(x)) {
        return nullptr;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return std::stod(buf);
}

// ---------------------------------------------------------------------------
// Grid syntax

inline std::vector<std::string> split(const std::string &text, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(text);
    while (std::getline(in, cur, sep)) {
        out.push_back(cur);
    }
    return out;
}

inline std::string trim(const std::string &s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) {
        return "";
    }
    return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

inline std::size_t parse_count(const std::string &token) {
    const std::string t = trim(token);
    if (t.empty() || t.find_first_not_of("0123456789") != std::string::npos) {
        throw Error(ErrorKind::ParseError, "expected a non-negative integer, got '" + token + "'");
    }
    return static_cast<std::size_t>(std::stoull(t));
}

/// Real number or a multiple of pi: "0.3", "pi", "pi/4", "3pi/8", "3*pi/8".
inline double parse_real(const std::string &token) {
    std::string t = trim(token);
    const auto pi_at = t.find("pi");
    try {
        if (pi_at == std::string::npos) {
            std::size_t used = 0;
            const double v = std::stod(t, &used);
            if (used != t.size()) {
                throw Error(ErrorKind::ParseError, "");
            }
            return v;
        }
        std::string coeff = t.substr(0, pi_at);
        if (!coeff.empty() && coeff.back() == '*') {
            coeff.pop_back();
        }
        double value = M_PI * (coeff.empty() ? 1.0 : std::stod(coeff));
        const std::string rest = t.substr(pi_at + 2);
        if (!rest.empty()) {
            if (rest[0] != '/') {
                throw Error(ErrorKind::ParseError, "");
            }
            value /= std::stod(rest.substr(1));
        }
        return value;
    } catch (const std::exception &) {
        throw Error(ErrorKind::ParseError, "cannot parse number '" + token + "'");
    }
}

/// Comma list of counts and inclusive ranges "a..b".
inline std::vector<std::size_t> parse_count_list(const std::string &text) {
    std::vector<std::size_t> out;
    if (trim(text).empty()) {
        return out;
    }
    for (const auto &part : split(text, ',')) {
        const auto dots = part.find("..");
        if (dots == std::string::npos) {
            out.push_back(parse_count(part));
            continue;
        }
        const std::size_t lo = parse_count(part.substr(0, dots));
        const std::size_t hi = parse_count(part.substr(dots + 2));
        for (std::size_t v = lo; v <= hi; ++v) {
            out.push_back(v);
        }
    }
    return out;
}

/// Comma list of reals and ranges "lo..hi:k" (k evenly spaced points,
/// endpoints included, default 5).
inline std::vector<double> parse_real_list(const std::string &text) {
    std::vector<double> out;
    if (trim(text).empty()) {
        return out;
    }
    for (const auto &part : split(text, ',')) {
        const auto dots = part.find("..");
        if (dots == std::string::npos) {
            out.push_back(parse_real(part));
            continue;
        }
        std::string hi_text = part.substr(dots + 2);
        std::size_t points = 5;
        const auto colon = hi_text.find(':');
        if (colon != std::string::npos) {
            points = parse_count(hi_text.substr(colon + 1));
            hi_text = hi_text.substr(0, colon);
        }
        const double lo = parse_real(part.substr(0, dots));
        const double hi = parse_real(hi_text);
        if (points == 0) {
            continue;
        }
        if (points == 1) {
            out.push_back(lo);
            continue;
        }
        for (std::size_t i = 0; i < points; ++i) {
            out.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1));
        }
    }
    return out;
}

inline std::vector<ProtocolId> parse_protocol_list(const std::string &text) {
    std::vector<ProtocolId> out;
    for (const auto &part : split(text, ',')) {
        if (!trim(part).empty()) {
            out.push_back(parse_protocol(trim(part)));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Config echo

inline Json config_json(const ExperimentConfig &c) {
    Json j;
    j["subcommand"] = c.subcommand;
    Json ids = Json::array();
    for (auto id : c.protocols) {
        ids.push_back(std::string(to_string(id)));
    }
    j["protocol"] = ids;
    j["n"] = c.ns;
    j["m"] = c.ms;
    Json alphas = Json::array();
    for (double a : c.alphas) {
        alphas.push_back(number(a));
    }
    j["alpha"] = alphas;
    j["loss"] = number(c.loss);
    j["flip"] = number(c.flip);
    j["error_allowance"] = c.error_allowance ? number(*c.error_allowance) : Json(nullptr);
    j["code"] = c.code_path.empty() ? Json(nullptr) : Json(c.code_path);
    j["trials"] = c.trials;
    j["seed"] = c.seed;
    auto reals = [](const std::vector<double> &v) {
        Json a = Json::array();
        for (double x : v) {
            a.push_back(number(x));
        }
        return a;
    };
    j["p_s"] = reals(c.p_s);
    j["p_ce"] = reals(c.p_ce);
    j["p_cv"] = reals(c.p_cv);
    j["resource_n"] = c.resource_n ? Json(*c.resource_n) : Json(nullptr);
    j["format"] = c.format == Format::Json ? "json" : "csv";
    return j;
}

inline Report start_report(const ExperimentConfig &c) {
    Report r;
    r.config = config_json(c);
    return r;
}

inline ecc::BaseCodeSpec load_base(const ExperimentConfig &c) {
    return c.code_path.empty() ? ecc::extended_hamming_8_4() : ecc::BaseCodeSpec::load(c.code_path);
}

// Runs `body` for one grid point, turning library errors into a diagnostic row.
template <typename Body>
void grid_point(Report &r, Json row, Body &&body) {
    try {
        body(row);
    } catch (const Error &e) {
        row["error"] = error_kind_name(e.kind());
        row["message"] = e.what();
    }
    r.rows.push_back(std::move(row));
}

// ---------------------------------------------------------------------------
// Subcommands

/// Closed-form versus brute-force trace distance of the evidence operators.
inline Report cmd_conceal(const ExperimentConfig &c) {
    Report r = start_report(c);
    std::uint64_t index = 0;
    for (auto id : c.protocols) {
        const bool uses_alpha = id == ProtocolId::P1;
        const std::vector<double> alphas = uses_alpha ? c.alphas : std::vector<double>{std::nan("")};
        for (std::size_t n : c.ns) {
            for (double alpha : alphas) {
                Json row;
                row["protocol"] = std::string(to_string(id));
                row["n"] = n;
                row["alpha"] = number(alpha);
                const std::uint64_t seed = mix_seed(c.seed, index++);
                grid_point(r, std::move(row), [&](Json &row) {
                    if (id != ProtocolId::P1 && id != ProtocolId::P2 && id != ProtocolId::P3 && id != ProtocolId::P6) {
                        throw Error(ErrorKind::InvalidArgument, "no concealing operator for " + std::string(to_string(id)));
                    }
                    Rng rng(seed);
                    BitString reference = BitString::random(n, rng);
                    const auto [rho0, rho1] = concealing::evidence_pair(
                        id, n, uses_alpha ? std::optional<double>(alpha) : std::nullopt, reference);
                    const double brute = linalg::trace_distance(rho0, rho1);
                    row["c"] = id == ProtocolId::P3 ? Json(reference.to_string()) : Json(nullptr);
                    if (id == ProtocolId::P6) {
                        row["closed_form"] = nullptr;
                        row["brute_force"] = number(brute);
                        row["abs_diff"] = nullptr;
                    } else {
                        const double closed = concealing::closed_form_distance(
                            id, n, uses_alpha ? std::optional<double>(alpha) : std::nullopt);
                        const double diff = std::abs(closed - brute);
                        row["closed_form"] = number(closed);
                        row["brute_force"] = number(brute);
                        row["abs_diff"] = number(diff);
                        if (diff > kConcealTolerance) {
                            r.exit_code = 1;
                        }
                    }
                    const auto h = concealing::helstrom_advantage(rho0, rho1, c.trials, rng);
                    row["helstrom_empirical"] = number(h.empirical);
                    row["helstrom_standard_error"] = number(h.standard_error);
                });
            }
        }
    }
    return r;
}

/// Single-flip cheat success Alice can expect per commitment string, or
/// nullopt where the protocol has no single-flip cheat.
inline std::optional<double> expected_flip_success(ProtocolId id, double alpha, std::size_t m) {
    const double md = static_cast<double>(m);
    switch (id) {
        case ProtocolId::P1: return std::pow(std::cos(alpha), 2.0 * md);
        case ProtocolId::P2:
        case ProtocolId::P5: return std::pow(0.5, md);
        case ProtocolId::P3: return std::pow(0.25, md);
        case ProtocolId::P6: return 0.0;
        case ProtocolId::P8: return std::nullopt;
    }
    return std::nullopt;
}

/// Honest acceptance, cheat success and a sample transcript per grid point.
inline Report cmd_run(const ExperimentConfig &c) {
    Report r = start_report(c);
    std::shared_ptr<const ecc::LinearCode> code;
    std::uint64_t index = 0;
    for (auto id : c.protocols) {
        const bool uses_alpha = id == ProtocolId::P1;
        const std::vector<double> alphas = uses_alpha ? c.alphas : std::vector<double>{std::nan("")};
        for (std::size_t n : c.ns) {
            for (std::size_t m : c.ms) {
                for (double alpha : alphas) {
                    Json row;
                    row["protocol"] = std::string(to_string(id));
                    row["n"] = n;
                    row["m"] = m;
                    row["alpha"] = number(alpha);
                    const std::uint64_t seed = mix_seed(c.seed, index++);
                    grid_point(r, std::move(row), [&](Json &row) {
                        protocols::ProtocolParams p;
                        p.protocol = id;
                        p.n = n;
                        p.m = m;
                        if (uses_alpha) {
                            p.alpha = alpha;
                        }
                        p.channel.loss_prob = c.loss;
                        p.channel.flip_prob = c.flip;
                        p.error_allowance = c.error_allowance;
                        p.seed = seed;
                        if (id == ProtocolId::P8) {
                            if (!code) {
                                code = std::make_shared<const ecc::LinearCode>(ecc::derive_code(load_base(c)));
                            }
                            p.code = code;
                        }
                        p = p.resolved();
                        const auto honest = protocols::honest_acceptance(p, c.trials, mix_seed(seed, 1));
                        row["honest_acceptance"] = number(honest.rate());
                        row["honest_ci_low"] = number(honest.lower());
                        row["honest_ci_high"] = number(honest.upper());
                        RateEstimate cheat;
                        if (id == ProtocolId::P8) {
                            std::vector<std::size_t> positions;
                            const BitString row0 = code->generator().row(0);
                            for (std::size_t j = 0; j < row0.size(); ++j) {
                                if (row0[j]) {
                                    positions.push_back(j);
                                }
                            }
                            cheat = protocols::estimate_rate(mix_seed(seed, 2), c.trials, [&](Rng &rng) {
                                return protocols::run_super_channel_cheat(p, positions, rng);
                            });
                            row["cheat"] = "super_channel";
                        } else {
                            cheat = protocols::bitflip_cheat_success(p, c.trials, mix_seed(seed, 2));
                            row["cheat"] = "bit_flip";
                        }
                        row["cheat_success"] = number(cheat.rate());
                        row["cheat_ci_low"] = number(cheat.lower());
                        row["cheat_ci_high"] = number(cheat.upper());
                        const auto expected = expected_flip_success(id, p.alpha, m);
                        row["cheat_expected"] = expected ? number(*expected) : Json(nullptr);
                        Rng rng(mix_seed(seed, 3));
                        auto t = protocols::commit(p, rng.bit(), rng);
                        protocols::verify(t, protocols::open(t), rng);
                        row["sample_transcript"] = transcript_io::to_json(t);
                    });
                }
            }
        }
    }
    return r;
}

inline std::string power_of_two(double log2) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "2^%.12g", log2);
    return buf;
}

/// Entanglement attack per grid point plus optional resource line.
inline Report cmd_attack(const ExperimentConfig &c) {
    Report r = start_report(c);
    std::uint64_t index = 0;
    for (auto id : c.protocols) {
        const bool uses_alpha = id == ProtocolId::P1;
        const std::vector<double> alphas = uses_alpha ? c.alphas : std::vector<double>{M_PI / 4};
        for (std::size_t n : c.ns) {
            for (double alpha : alphas) {
                Json row;
                row["kind"] = "attack";
                row["protocol"] = std::string(to_string(id));
                row["n"] = n;
                row["alpha"] = uses_alpha ? number(alpha) : Json(nullptr);
                const std::uint64_t seed = mix_seed(c.seed, index++);
                grid_point(r, std::move(row), [&](Json &row) {
                    Rng rng(seed);
                    const auto rep = attack::run_cheat(id, n, alpha, c.trials, rng);
                    row["fidelity_achieved"] = number(rep.fidelity_achieved);
                    row["fidelity"] = number(rep.fidelity);
                    row["fidelity_bound"] = number(rep.fidelity_bound);
                    row["bound_margin"] = number(rep.fidelity_achieved - rep.fidelity_bound);
                    row["trace_distance"] = number(rep.trace_distance);
                    row["unitarity_residual"] = number(rep.unitarity_residual);
                    row["accept_keep_exact"] = number(rep.exact_accept_keep);
                    row["accept_keep_empirical"] = number(rep.empirical_keep.rate());
                    row["accept_switch_exact"] = number(rep.exact_accept_switch);
                    row["accept_switch_empirical"] = number(rep.empirical_switch.rate());
                    row["accept_switch_ci_low"] = number(rep.empirical_switch.lower());
                    row["accept_switch_ci_high"] = number(rep.empirical_switch.upper());
                    row["time_ops"] = number(rep.resources.time_ops());
                    row["memory_entries"] = number(rep.resources.memory_entries());
                });
            }
        }
    }
    if (c.resource_n) {
        const auto est = attack::resource_estimate(*c.resource_n);
        Json row;
        row["kind"] = "resource";
        row["n"] = *c.resource_n;
        row["time_ops"] = power_of_two(est.time_log2);
        row["memory_entries"] = power_of_two(est.memory_log2);
        row["feasible"] = est.feasible;
        row["exceeds_atoms_on_earth"] = est.exceeds_atoms_on_earth;
        r.rows.push_back(std::move(row));
    }
    return r;
}

/// Derived-code summary, independence verdict, guessing and binding tables.
inline Report cmd_ecc(const ExperimentConfig &c) {
    Report r = start_report(c);
    ecc::BaseCodeSpec base;
    ecc::LinearCode code;
    try {
        base = load_base(c);
        code = ecc::derive_code(base);
    } catch (const Error &e) {
        Json row;
        row["kind"] = "error";
        row["error"] = error_kind_name(e.kind());
        row["message"] = e.what();
        r.rows.push_back(std::move(row));
        r.exit_code = 1;
        return r;
    }
    Json summary;
    summary["kind"] = "code";
    summary["eta"] = base.eta;
    summary["xi"] = base.xi;
    summary["t"] = base.t;
    summary["length"] = code.length();
    summary["dimension"] = code.dimension();
    summary["min_distance"] = code.min_distance();
    summary["t_prime"] = code.t_prime();
    grid_point(r, std::move(summary), [&](Json &row) {
        row["independence"] = ecc::independence_check(code, base.t, boolfn::BooleanFn::parity(code.dimension()));
    });
    for (std::size_t n : c.ns) {
        Json row;
        row["kind"] = "evidence_length";
        row["n"] = n;
        grid_point(r, std::move(row), [&](Json &row) {
            const auto len = ecc::evidence_length(n, base.eta, base.xi);
            row["blocks"] = len.blocks;
            row["zeta"] = len.zeta;
            row["zeta_xi_form"] = len.zeta_xi_form;
            row["note"] = "zeta counts eta - 1 qubits per block; zeta_xi_form is the xi - 1 count";
        });
    }
    for (double p_s : c.p_s) {
        for (std::size_t n : c.ns) {
            for (std::size_t m : c.ms) {
                Json row;
                row["kind"] = "guess";
                row["p_s"] = number(p_s);
                row["n"] = n;
                row["m"] = m;
                grid_point(r, std::move(row), [&](Json &row) {
                    const auto g = ecc::bob_guess_probabilities(base.eta, base.xi, base.t, p_s, n, m);
                    row["p_max1"] = number(g.p_max1);
                    row["p_max"] = number(g.p_max);
                    row["P_max"] = number(g.P_max);
                });
            }
        }
    }
    for (double p_ce : c.p_ce) {
        for (double p_cv : c.p_cv) {
            Json row;
            row["kind"] = "binding";
            row["p_ce"] = number(p_ce);
            row["p_cv"] = number(p_cv);
            grid_point(r, std::move(row), [&](Json &row) {
                const auto b = ecc::binding_margin(code.t_prime(), base.eta, base.xi, p_ce, p_cv);
                row["lhs"] = number(b.lhs);
                row["rhs"] = number(b.rhs);
                row["correction_rhs"] = number(b.correction_rhs);
                row["cheat_rhs"] = number(b.cheat_rhs);
                row["satisfied"] = b.satisfied;
            });
        }
    }
    return r;
}

inline Report run(const ExperimentConfig &c) {
    if (c.subcommand == "conceal") {
        return cmd_conceal(c);
    }
    if (c.subcommand == "run") {
        return cmd_run(c);
    }
    if (c.subcommand == "attack") {
        return cmd_attack(c);
    }
    if (c.subcommand == "ecc") {
        return cmd_ecc(c);
    }
    throw Error(ErrorKind::InvalidArgument, "unknown subcommand '" + c.subcommand + "'");
}

// ---------------------------------------------------------------------------
// Rendering

inline std::string render_json(const Report &r) {
    Json j;
    j["config"] = r.config;
    j["rows"] = r.rows;
    j["version"] = QSBC_VERSION;
    return j.dump(2) + "\n";
}

inline std::string csv_field(const Json &v) {
    std::string text;
    if (v.is_null()) {
        return "";
    }
    if (v.is_string()) {
        text = v.get<std::string>();
    } else if (v.is_number_float()) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.12g", v.get<double>());
        text = buf;
    } else {
        text = v.dump();
    }
    if (text.find_first_of(",\"\n") == std::string::npos) {
        return text;
    }
    std::string quoted = "\"";
    for (char ch : text) {
        if (ch == '"') {
            quoted += '"';
        }
        quoted += ch;
    }
    return quoted + "\"";
}

/// Header is the union of row keys in first-seen order. Config and version
/// lead as comment lines.
inline std::string render_csv(const Report &r) {
    std::vector<std::string> keys;
    for (const auto &row : r.rows) {
        for (const auto &item : row.items()) {
            if (std::find(keys.begin(), keys.end(), item.key()) == keys.end()) {
                keys.push_back(item.key());
            }
        }
    }
    std::string out = "# version " + std::string(QSBC_VERSION) + "\n# config " + r.config.dump() + "\n";
    for (std::size_t i = 0; i < keys.size(); ++i) {
        out += (i ? "," : "") + csv_field(Json(keys[i]));
    }
    out += "\n";
    for (const auto &row : r.rows) {
        for (std::size_t i = 0; i < keys.size(); ++i) {
            out += i ? "," : "";
            if (row.contains(keys[i])) {
                out += csv_field(row.at(keys[i]));
            }
        }
        out += "\n";
    }
    return out;
}

inline std::string render(const Report &r, Format f) { return f == Format::Json ? render_json(r) : render_csv(r); }

}  // namespace qsbc::cli
