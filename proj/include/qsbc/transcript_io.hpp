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

// JSON form of a session transcript. Amplitudes and angles are written as
// the 16 hex digits of their IEEE-754 bit pattern so a round trip is exact.

#pragma once

#include <bit>
#include <cstdint>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "qsbc/protocols.hpp"

namespace qsbc::transcript_io {

using Json = nlohmann::ordered_json;

inline std::string hex_double(double x) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(std::bit_cast<std::uint64_t>(x)));
    return buf;
}

inline double parse_hex_double(const std::string &text) {
    if (text.size() != 16) {
        throw Error(ErrorKind::ParseError, "hex double needs 16 digits: '" + text + "'");
    }
    std::uint64_t bits = 0;
    for (char ch : text) {
        int digit;
        if (ch >= '0' && ch <= '9') {
            digit = ch - '0';
        } else if (ch >= 'a' && ch <= 'f') {
            digit = ch - 'a' + 10;
        } else if (ch >= 'A' && ch <= 'F') {
            digit = ch - 'A' + 10;
        } else {
            throw Error(ErrorKind::ParseError, "bad hex digit in '" + text + "'");
        }
        bits = bits << 4 | static_cast<std::uint64_t>(digit);
    }
    return std::bit_cast<double>(bits);
}

namespace detail {

inline Json strings_to_json(const std::vector<BitString> &v) {
    Json out = Json::array();
    for (const auto &s : v) {
        out.push_back(s.to_string());
    }
    return out;
}

inline std::vector<BitString> strings_from_json(const Json &j) {
    std::vector<BitString> out;
    for (const auto &s : j) {
        out.push_back(BitString::parse(s.get<std::string>()));
    }
    return out;
}

inline const char *phase_name(protocols::Phase p) {
    switch (p) {
        case protocols::Phase::Empty: return "empty";
        case protocols::Phase::Committed: return "committed";
        case protocols::Phase::Opened: return "opened";
        case protocols::Phase::Verified: return "verified";
    }
    return "?";
}

inline protocols::Phase parse_phase(const std::string &s) {
    for (auto p : {protocols::Phase::Empty, protocols::Phase::Committed, protocols::Phase::Opened,
                   protocols::Phase::Verified}) {
        if (s == phase_name(p)) {
            return p;
        }
    }
    throw Error(ErrorKind::ParseError, "unknown phase '" + s + "'");
}

inline Json opening_to_json(const protocols::Opening &o) {
    Json j;
    j["declared_bit"] = o.declared_bit;
    j["values"] = strings_to_json(o.values);
    j["bases"] = strings_to_json(o.bases);
    j["shifts"] = strings_to_json(o.shifts);
    j["codewords"] = strings_to_json(o.codewords);
    return j;
}

inline protocols::Opening opening_from_json(const Json &j) {
    protocols::Opening o;
    o.declared_bit = j.at("declared_bit").get<int>();
    o.values = strings_from_json(j.at("values"));
    o.bases = strings_from_json(j.at("bases"));
    o.shifts = strings_from_json(j.at("shifts"));
    o.codewords = strings_from_json(j.at("codewords"));
    return o;
}

}  // namespace detail

inline Json to_json(const protocols::SessionTranscript &t) {
    const auto &p = t.params;
    Json params;
    params["protocol"] = std::string(to_string(p.protocol));
    params["n"] = p.n;
    params["m"] = p.m;
    params["alpha"] = hex_double(p.alpha);
    params["commit_fn"] = p.commit_fn ? p.commit_fn->to_truth_table() : std::string();
    params["loss_prob"] = hex_double(p.channel.loss_prob);
    params["flip_prob"] = hex_double(p.channel.flip_prob);
    if (p.code) {
        Json rows = Json::array();
        for (std::size_t i = 0; i < p.code->dimension(); ++i) {
            rows.push_back(p.code->generator().row(i).to_string());
        }
        params["code_generator"] = rows;
    } else {
        params["code_generator"] = nullptr;
    }
    params["error_allowance"] = p.error_allowance ? Json(hex_double(*p.error_allowance)) : Json(nullptr);
    params["zero_values"] = p.zero_values;

    Json j;
    j["protocol"] = std::string(to_string(p.protocol));
    j["seed"] = p.seed;
    j["params"] = params;
    j["phase"] = detail::phase_name(t.phase);
    j["committed_bit"] = t.committed_bit;
    j["private_record"] = {{"values", detail::strings_to_json(t.secret.values)},
                           {"bases", detail::strings_to_json(t.secret.bases)},
                           {"references", detail::strings_to_json(t.secret.references)},
                           {"xs", detail::strings_to_json(t.secret.xs)},
                           {"shifts", detail::strings_to_json(t.secret.shifts)},
                           {"codewords", detail::strings_to_json(t.secret.codewords)}};
    j["public_commit_data"] = {{"references", detail::strings_to_json(t.published.references)},
                               {"values", detail::strings_to_json(t.published.values)}};
    Json evidence = Json::array();
    for (const auto &s : t.evidence) {
        Json amps = Json::array();
        for (Eigen::Index i = 0; i < s.dim(); ++i) {
            amps.push_back(hex_double(s.amplitudes()(i).real()));
            amps.push_back(hex_double(s.amplitudes()(i).imag()));
        }
        evidence.push_back({{"qubits", s.qubit_count()}, {"amplitudes", amps}});
    }
    j["evidence"] = evidence;
    j["opening"] = t.opening ? detail::opening_to_json(*t.opening) : Json(nullptr);
    if (t.verdict) {
        const auto &v = *t.verdict;
        j["verdict"] = {{"accepted", v.accepted},         {"reason", v.reason},
                        {"checked", v.checked},           {"mismatches", v.mismatches},
                        {"error_fraction", hex_double(v.error_fraction)}, {"budget", hex_double(v.budget)}};
    } else {
        j["verdict"] = nullptr;
    }
    return j;
}

inline protocols::SessionTranscript from_json(const Json &j) {
    try {
        protocols::SessionTranscript t;
        auto &p = t.params;
        const Json &params = j.at("params");
        p.protocol = parse_protocol(params.at("protocol").get<std::string>());
        p.n = params.at("n").get<std::size_t>();
        p.m = params.at("m").get<std::size_t>();
        p.alpha = parse_hex_double(params.at("alpha").get<std::string>());
        const auto table = params.at("commit_fn").get<std::string>();
        if (!table.empty()) {
            p.commit_fn = std::make_shared<const boolfn::BooleanFn>(boolfn::BooleanFn::from_truth_table(table));
        }
        p.channel.loss_prob = parse_hex_double(params.at("loss_prob").get<std::string>());
        p.channel.flip_prob = parse_hex_double(params.at("flip_prob").get<std::string>());
        if (!params.at("code_generator").is_null()) {
            const auto rows = detail::strings_from_json(params.at("code_generator"));
            p.code = std::make_shared<const ecc::LinearCode>(
                ecc::LinearCode::from_generator(ecc::Gf2Matrix::from_rows(rows)));
        }
        if (!params.at("error_allowance").is_null()) {
            p.error_allowance = parse_hex_double(params.at("error_allowance").get<std::string>());
        }
        p.zero_values = params.at("zero_values").get<bool>();
        p.seed = j.at("seed").get<std::uint64_t>();
        t.phase = detail::parse_phase(j.at("phase").get<std::string>());
        t.committed_bit = j.at("committed_bit").get<int>();
        const Json &rec = j.at("private_record");
        t.secret.values = detail::strings_from_json(rec.at("values"));
        t.secret.bases = detail::strings_from_json(rec.at("bases"));
        t.secret.references = detail::strings_from_json(rec.at("references"));
        t.secret.xs = detail::strings_from_json(rec.at("xs"));
        t.secret.shifts = detail::strings_from_json(rec.at("shifts"));
        t.secret.codewords = detail::strings_from_json(rec.at("codewords"));
        const Json &pub = j.at("public_commit_data");
        t.published.references = detail::strings_from_json(pub.at("references"));
        t.published.values = detail::strings_from_json(pub.at("values"));
        for (const auto &e : j.at("evidence")) {
            const auto qubits = e.at("qubits").get<std::size_t>();
            const auto &amps = e.at("amplitudes");
            linalg::ComplexVector v(static_cast<Eigen::Index>(amps.size() / 2));
            for (Eigen::Index i = 0; i < v.size(); ++i) {
                v(i) = {parse_hex_double(amps.at(2 * i).get<std::string>()),
                        parse_hex_double(amps.at(2 * i + 1).get<std::string>())};
            }
            t.evidence.emplace_back(qubits, std::move(v));
        }
        if (!j.at("opening").is_null()) {
            t.opening = detail::opening_from_json(j.at("opening"));
        }
        if (!j.at("verdict").is_null()) {
            const Json &v = j.at("verdict");
            protocols::Verdict verdict;
            verdict.accepted = v.at("accepted").get<bool>();
            verdict.reason = v.at("reason").get<std::string>();
            verdict.checked = v.at("checked").get<std::size_t>();
            verdict.mismatches = v.at("mismatches").get<std::size_t>();
            verdict.error_fraction = parse_hex_double(v.at("error_fraction").get<std::string>());
            verdict.budget = parse_hex_double(v.at("budget").get<std::string>());
            t.verdict = verdict;
        }
        return t;
    } catch (const nlohmann::json::exception &e) {
        throw Error(ErrorKind::ParseError, std::string("transcript: ") + e.what());
    }
}

inline std::string serialize(const protocols::SessionTranscript &t) { return to_json(t).dump(2); }

inline protocols::SessionTranscript deserialize(const std::string &text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const nlohmann::json::exception &e) {
        throw Error(ErrorKind::ParseError, std::string("transcript: ") + e.what());
    }
    return from_json(j);
}

}  // namespace qsbc::transcript_io
