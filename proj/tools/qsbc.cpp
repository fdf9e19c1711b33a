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

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qsbc/cli.hpp"

namespace {

struct RawOptions {
    std::string protocol = "P1";
    std::string n = "1";
    std::string m = "1";
    std::string alpha = "pi/4";
    double loss = 0.0;
    double flip = 0.0;
    std::string error_allowance;
    std::string code;
    std::size_t trials = 1000;
    std::uint64_t seed = 1;
    std::string out;
    std::string format = "json";
    std::string p_s = "0,0.5,1";
    std::string p_ce = "0.05";
    std::string p_cv = "0.5";
    std::string resource_n;
};

void add_common(CLI::App *cmd, RawOptions &o) {
    cmd->add_option("--protocol", o.protocol, "protocol ids, comma separated (P1,P2,P3,P5,P6,P8)");
    cmd->add_option("--n", o.n, "string lengths: list and a..b ranges");
    cmd->add_option("--m", o.m, "strings per commitment: list and a..b ranges");
    cmd->add_option("--alpha", o.alpha, "angles in radians: list, pi/K tokens, lo..hi:k ranges");
    cmd->add_option("--loss", o.loss, "per-qubit loss probability")->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--flip", o.flip, "per-qubit bit-flip probability")->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--error-allowance", o.error_allowance, "tolerated mismatch fraction (default: channel disturbance)");
    cmd->add_option("--code", o.code, "base code file (default: extended Hamming [8,4])");
    cmd->add_option("--trials", o.trials, "Monte Carlo trials per grid point");
    cmd->add_option("--seed", o.seed, "master seed");
    cmd->add_option("--out", o.out, "output file (default: stdout)");
    cmd->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--p-s", o.p_s, "ecc: per-qubit guessing probabilities");
    cmd->add_option("--p-ce", o.p_ce, "ecc: channel error probabilities");
    cmd->add_option("--p-cv", o.p_cv, "ecc: per-change detection probabilities");
    cmd->add_option("--resource-n", o.resource_n, "attack: also report the cost of the attack at this n");
}

qsbc::cli::ExperimentConfig to_config(const std::string &subcommand, const RawOptions &o) {
    using namespace qsbc::cli;
    ExperimentConfig c;
    c.subcommand = subcommand;
    c.protocols = parse_protocol_list(o.protocol);
    c.ns = parse_count_list(o.n);
    c.ms = parse_count_list(o.m);
    c.alphas = parse_real_list(o.alpha);
    c.loss = o.loss;
    c.flip = o.flip;
    if (!o.error_allowance.empty()) {
        c.error_allowance = parse_real(o.error_allowance);
    }
    c.code_path = o.code;
    c.trials = o.trials;
    c.seed = o.seed;
    c.format = o.format == "csv" ? Format::Csv : Format::Json;
    c.p_s = parse_real_list(o.p_s);
    c.p_ce = parse_real_list(o.p_ce);
    c.p_cv = parse_real_list(o.p_cv);
    if (!o.resource_n.empty()) {
        c.resource_n = parse_count(o.resource_n);
    }
    return c;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Simulator for qubit-string bit commitment protocols"};
    app.set_version_flag("--version", std::string(QSBC_VERSION));
    app.require_subcommand(1);

    RawOptions options;
    const std::pair<const char *, const char *> commands[] = {
        {"conceal", "closed-form vs brute-force trace distance of the evidence"},
        {"run", "honest and cheating protocol runs"},
        {"attack", "entanglement attack on the binding property"},
        {"ecc", "code derivation, guessing and binding tables"},
    };
    for (const auto &[name, help] : commands) {
        add_common(app.add_subcommand(name, help), options);
    }
    CLI11_PARSE(app, argc, argv);

    const std::string subcommand = app.get_subcommands().front()->get_name();
    try {
        const auto config = to_config(subcommand, options);
        const auto report = qsbc::cli::run(config);
        const std::string text = qsbc::cli::render(report, config.format);
        if (options.out.empty()) {
            std::cout << text;
        } else {
            std::ofstream out(options.out, std::ios::binary);
            if (!out) {
                std::cerr << "cannot write " << options.out << "\n";
                return 2;
            }
            out << text;
        }
        for (const auto &row : report.rows) {
            if (row.contains("error")) {
                std::cerr << row.at("message").get<std::string>() << "\n";
            }
        }
        return report.exit_code;
    } catch (const qsbc::Error &e) {
        std::cerr << e.what() << "\n";
        return 2;
    }
}
