//
// Copyright (c) 2026 The credal-plp authors
//
// Permission is hereby granted, free of charge, to any person obtaining a copy
// of this software and associated documentation files (the "Software"), to
// deal in the Software without restriction, including without limitation the
// rights to use, copy, modify, merge, publish, distribute, sublicense, and/or
// sell copies of the Software, and to permit persons to whom the Software is
// furnished to do so, subject to the following conditions:
//
// The above copyright notice and this permission notice shall be included in
// all copies or substantial portions of the Software.
//
// THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
// IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
// FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
// AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
// LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING
// FROM, OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS
// IN THE SOFTWARE.
//

#pragma once

#include "plp/compile.hpp"
#include "plp/error.hpp"
#include "plp/ground.hpp"
#include "plp/infer.hpp"
#include "plp/models.hpp"
#include "plp/syntax.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace plp::cli {

struct CliConfig {
    std::string subcommand;
    std::string input;
    std::string q;
    std::string e;
    std::string semantics = "auto";   // credal | wf | auto (models: credal | wf)
    std::string format = "text";      // text | json
    std::string out_path;
    std::string choice;
    std::string gamma;
    std::size_t max_choices = 20;
    std::size_t max_ground_rules = 1'000'000;
    std::size_t oracle_limit = 20;
    bool cross_check = false;
    bool timing = true;
};

namespace detail {

using json = nlohmann::ordered_json;

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) { throw InputError("cannot open " + path); }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline json number(const Rational& r) { return json{{"exact", to_fraction(r)}, {"decimal", to_display(r)}}; }

inline std::string text_number(const Rational& r) { return to_fraction(r) + " (" + to_display(r) + ")"; }

class Runner {
public:
    Runner(const CliConfig& cfg, std::ostream& out, std::ostream& err) : cfg_(cfg), out_(out), err_(err) {}

    int dispatch() {
        if (cfg_.subcommand == "check") { return check(); }
        load();
        if (cfg_.subcommand == "ground") { return emit_ground(); }
        if (cfg_.subcommand == "classify") { return emit_class(); }
        if (cfg_.subcommand == "models") { return models(); }
        if (cfg_.subcommand == "query") { return query(); }
        if (cfg_.subcommand == "consistency") { return consistency(); }
        if (cfg_.subcommand == "export-bn") { return export_network(); }
        throw InputError("unknown subcommand " + cfg_.subcommand);
    }

private:
    bool json_mode() const { return cfg_.format == "json"; }

    void load() {
        const std::string text = read_file(cfg_.input);
        auto res = parse_program(text);
        for (const auto& d : res.diagnostics) { err_ << d.render(cfg_.input) << '\n'; }
        if (!res.ok()) { throw InputError(cfg_.input + ": " + std::to_string(res.error_count()) + " syntax error(s)"); }
        program_ = std::move(*res.program);
        ground_ = ground(program_, {.max_ground_rules = cfg_.max_ground_rules});
        class_ = classify(ground_);
    }

    InferenceOptions infer_opts() const { return {.max_choices = cfg_.max_choices}; }

    void write(const std::string& text) {
        if (cfg_.out_path.empty()) {
            out_ << text;
            return;
        }
        std::ofstream f(cfg_.out_path, std::ios::binary);
        if (!f) { throw InputError("cannot write " + cfg_.out_path); }
        f << text;
    }

    int check() {
        const std::string text = read_file(cfg_.input);
        auto res = parse_program(text);
        for (const auto& d : res.diagnostics) { out_ << d.render(cfg_.input) << '\n'; }
        if (!res.ok()) { return static_cast<int>(ExitCode::user_error); }
        const auto& p = *res.program;
        if (json_mode()) {
            out_ << json{{"ok", true}, {"rules", p.rules.size()}, {"prob_facts", p.prob_facts.size()},
                         {"warnings", res.diagnostics.size()}}.dump(2)
                 << '\n';
        } else {
            out_ << "ok: " << p.rules.size() << " rules, " << p.prob_facts.size() << " probabilistic facts\n";
        }
        return 0;
    }

    int emit_ground() {
        if (!json_mode()) {
            write(dump_ground(ground_));
            return 0;
        }
        json j;
        j["atoms"] = json::array();
        for (AtomId a = 0; a != ground_.atom_count(); ++a) { j["atoms"].push_back({{"id", a}, {"text", ground_.name(a)}}); }
        j["facts"] = ground_.facts;
        j["rules"] = json::array();
        for (const auto& r : ground_.rules) { j["rules"].push_back({{"head", r.head}, {"pos", r.pos}, {"neg", r.neg}}); }
        j["choices"] = json::array();
        for (const auto& c : ground_.choice_points) {
            j["choices"].push_back({{"id", c.id}, {"atom", c.atom}, {"prob", to_fraction(c.prob)}});
        }
        write(j.dump(2) + '\n');
        return 0;
    }

    std::vector<std::string> witness_names() const {
        std::vector<std::string> names;
        if (class_.witness) {
            for (auto a : *class_.witness) { names.push_back(ground_.name(a)); }
        }
        return names;
    }

    int emit_class() {
        const auto names = witness_names();
        if (json_mode()) {
            out_ << json{{"class", to_string(class_.kind)}, {"witness", names}}.dump(2) << '\n';
            return 0;
        }
        out_ << "class: " << to_string(class_.kind) << '\n';
        if (!names.empty()) {
            out_ << "cycle:";
            for (const auto& n : names) { out_ << ' ' << n; }
            out_ << '\n';
        }
        return 0;
    }

    TotalChoice selected_choice() const {
        if (cfg_.choice.empty() && !ground_.choice_points.empty()) {
            throw InputError("program has " + std::to_string(ground_.choice_points.size()) +
                             " choice points; select one total choice with --choice");
        }
        return choice_from_bits(ground_, cfg_.choice);
    }

    // Sorted `atom=value` lines.
    std::string model_lines(const std::vector<TruthValue>& values) const {
        std::vector<std::string> lines;
        for (AtomId a = 0; a != values.size(); ++a) {
            lines.push_back(ground_.name(a) + '=' + std::string(to_string(values[a])));
        }
        std::sort(lines.begin(), lines.end());
        std::string s;
        for (const auto& l : lines) { s += l + '\n'; }
        return s;
    }

    int models() {
        const TotalChoice t = selected_choice();
        const GroundProgram pg = program_for_choice(ground_, t);
        const bool wf = cfg_.semantics == "wf";
        if (!wf && cfg_.semantics != "credal" && cfg_.semantics != "stable" && cfg_.semantics != "auto") {
            throw InputError("models: --semantics must be credal or wf");
        }
        std::vector<std::vector<TruthValue>> all;
        if (wf) {
            all.push_back(well_founded_model(pg).value);
        } else {
            for (const auto& m : stable_models(pg)) {
                std::vector<TruthValue> v;
                for (bool b : m.truth) { v.push_back(b ? TruthValue::True : TruthValue::False); }
                all.push_back(std::move(v));
            }
        }
        if (json_mode()) {
            json j{{"choice", t.bits()}, {"weight", number(t.weight)}, {"semantics", wf ? "wf" : "stable"}};
            j["models"] = json::array();
            for (const auto& v : all) {
                json m = json::object();
                std::vector<std::pair<std::string, std::string>> kv;
                for (AtomId a = 0; a != v.size(); ++a) { kv.emplace_back(ground_.name(a), to_string(v[a])); }
                std::sort(kv.begin(), kv.end());
                for (auto& [k, val] : kv) { m[k] = val; }
                j["models"].push_back(std::move(m));
            }
            out_ << j.dump(2) << '\n';
            return 0;
        }
        for (std::size_t i = 0; i != all.size(); ++i) {
            if (i) { out_ << "%%\n"; }
            out_ << model_lines(all[i]);
        }
        if (all.empty()) { err_ << "no stable model for total choice " << describe(ground_, t) << '\n'; }
        return 0;
    }

    int consistency() {
        const auto report = check_consistency(ground_, infer_opts());
        if (json_mode()) {
            json j{{"consistent", report.consistent}, {"class", to_string(class_.kind)}};
            if (report.witness) {
                j["witness"] = {{"bits", report.witness->bits()}, {"choice", describe(ground_, *report.witness)}};
            }
            out_ << j.dump(2) << '\n';
        } else {
            out_ << "consistent: " << (report.consistent ? "yes" : "no") << '\n';
            if (report.witness) {
                out_ << "witness: " << report.witness->bits() << ' ' << describe(ground_, *report.witness) << '\n';
            }
        }
        return report.consistent ? 0 : static_cast<int>(ExitCode::inconsistent);
    }

    int export_network() {
        write(export_bn(compile_bn(ground_)));
        return 0;
    }

    std::vector<Assignment> parse_list(const std::string& text) const { return parse_assignments(text); }

    std::optional<Rational> parse_gamma() const {
        if (cfg_.gamma.empty()) { return std::nullopt; }
        auto g = parse_rational(cfg_.gamma);
        if (!g || *g < 0 || *g > 1) { throw InputError("--gamma must be a rational in [0,1]"); }
        return g;
    }

    [[noreturn]] static void cross_check_failed(const std::string& what) {
        throw Error(ExitCode::user_error, "cross-check failed: " + what);
    }

    // Stable-model enumeration against the brute-force oracle, per total choice.
    void oracle_check() const {
        if (ground_.atom_count() > cfg_.oracle_limit) { return; }
        for_each_total_choice(ground_, infer_opts(), [&](const TotalChoice& t) {
            const auto pg = program_for_choice(ground_, t);
            auto fast = stable_models(pg);
            std::sort(fast.begin(), fast.end());
            if (fast != exhaustive_stable_models(pg, cfg_.oracle_limit)) {
                cross_check_failed("stable models differ from exhaustive search for choice " + t.bits());
            }
            return true;
        });
    }

    int query() {
        const auto q = parse_list(cfg_.q);
        const auto e = parse_list(cfg_.e);
        const auto gamma = parse_gamma();
        std::string semantics = cfg_.semantics;
        if (semantics == "auto") {
            if (class_.kind == ProgramKind::general) {
                throw InputError("program is not stratified; the credal and well-founded semantics may differ, "
                                 "choose --semantics credal or --semantics wf");
            }
            semantics = "point";
        } else if (semantics != "credal" && semantics != "wf") {
            throw InputError("--semantics must be credal, wf or auto");
        }
        if (semantics != "wf" && (has_undefined(q) || has_undefined(e))) {
            throw InputError("'undefined' assignments are only meaningful with --semantics wf");
        }
        for (const auto* list : {&q, &e}) {
            for (const auto& a : *list) {
                if (!ground_.find(a.atom)) { err_ << "WARNING " << to_string(a.atom) << " is not in the active ground program; it is false in every model\n"; }
            }
        }

        const auto start = std::chrono::steady_clock::now();
        InferenceStats stats;
        std::optional<CredalInterval> interval;
        std::optional<Rational> point;
        bool undefined = false;
        if (semantics == "credal") {
            const Event qe = Event::from_assignments(ground_, q);
            if (e.empty()) {
                interval = credal_unconditional(ground_, qe, infer_opts(), &stats);
            } else {
                interval = credal_conditional(ground_, qe, Event::from_assignments(ground_, e), infer_opts(), &stats);
                undefined = !interval;
            }
            if (cfg_.cross_check) { oracle_check(); }
        } else {
            point = wf_query(ground_, q, e, infer_opts(), &stats);
            stats.models = stats.choices;
            undefined = !point;
            if (cfg_.cross_check && semantics == "point") {
                const Event qe = Event::from_assignments(ground_, q);
                auto cred = e.empty() ? std::optional(credal_unconditional(ground_, qe, infer_opts()))
                                      : credal_conditional(ground_, qe, Event::from_assignments(ground_, e), infer_opts());
                if (cred.has_value() != point.has_value() || (cred && (cred->lower != *point || cred->upper != *point))) {
                    cross_check_failed("credal bounds disagree with the point probability");
                }
                if (class_.kind == ProgramKind::acyclic && bn_query(compile_bn(ground_), q, e) != point) {
                    cross_check_failed("Bayesian network disagrees with the point probability");
                }
                oracle_check();
            }
        }
        const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

        std::optional<bool> decision;
        if (gamma) {
            if (undefined) {
                decision = false;
            } else {
                decision = (interval ? interval->lower : *point) > *gamma;
            }
        }

        if (json_mode()) {
            json j{{"semantics", semantics}, {"class", to_string(class_.kind)}};
            if (undefined) {
                j["result"] = "undefined";
            } else if (interval) {
                j["lower"] = number(interval->lower);
                j["upper"] = number(interval->upper);
            } else {
                j["probability"] = number(*point);
            }
            if (decision) { j["decision"] = *decision ? "YES" : "NO"; }
            j["choices"] = stats.choices;
            j["models"] = stats.models;
            if (cfg_.timing) { j["time_ms"] = ms; }
            out_ << j.dump(2) << '\n';
        } else {
            out_ << "semantics: " << semantics << '\n' << "class: " << to_string(class_.kind) << '\n';
            if (undefined) {
                out_ << "result: undefined\n";
            } else if (interval) {
                out_ << "lower: " << text_number(interval->lower) << '\n'
                     << "upper: " << text_number(interval->upper) << '\n';
            } else {
                out_ << "probability: " << text_number(*point) << '\n';
            }
            if (decision) { out_ << "decision: " << (*decision ? "YES" : "NO") << '\n'; }
            out_ << "choices: " << stats.choices << '\n' << "models: " << stats.models << '\n';
            if (cfg_.timing) { out_ << "time_ms: " << ms << '\n'; }
        }
        return 0;
    }

    const CliConfig& cfg_;
    std::ostream& out_;
    std::ostream& err_;
    Program program_;
    GroundProgram ground_;
    ProgramClass class_;
};

} // namespace detail

/// Parses `args` (without the program name) and runs one subcommand. Returns the exit code.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CliConfig cfg;
    CLI::App app{"Exact inference for probabilistic logic programs under the credal and well-founded semantics",
                 "plp"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"text", "json"}));
    app.add_option("--max-choices", cfg.max_choices, "Maximum number of ground probabilistic facts")
        ->envname("PLP_MAX_CHOICES");
    app.add_option("--max-ground-rules", cfg.max_ground_rules, "Maximum number of ground rules")
        ->envname("PLP_MAX_GROUND_RULES");
    app.add_option("--oracle-limit", cfg.oracle_limit, "Atom limit for the brute-force model oracle")
        ->envname("PLP_ORACLE_LIMIT");
    app.add_flag("--cross-check", cfg.cross_check, "Verify results against independent oracles");
    app.add_flag("!--no-timing", cfg.timing, "Omit the timing field");

    auto add = [&](const char* name, const char* help) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("file", cfg.input, "Program file")->required();
        return sub;
    };
    add("check", "Parse a program and print diagnostics");
    add("ground", "Print the active ground program")->add_option("--out", cfg.out_path, "Write to file");
    add("classify", "Classify the program as acyclic, stratified or general");
    auto* models = add("models", "Print stable or well-founded models for one total choice");
    models->add_option("--choice", cfg.choice, "One bit per choice point, 1 = kept");
    models->add_option("--semantics", cfg.semantics, "credal (stable models) or wf");
    auto* query = add("query", "Compute probabilities or lower/upper probabilities");
    query->add_option("--q", cfg.q, "Query assignments, e.g. \"wins(b)=true\"")->required();
    query->add_option("--e", cfg.e, "Evidence assignments");
    query->add_option("--semantics", cfg.semantics, "credal, wf or auto")
        ->check(CLI::IsMember({"credal", "wf", "auto"}));
    query->add_option("--gamma", cfg.gamma, "Decide whether the (lower) probability exceeds this threshold");
    add("consistency", "Check that every total choice has a stable model");
    add("export-bn", "Compile an acyclic program to a Bayesian network")
        ->add_option("--out", cfg.out_path, "Write to file");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return static_cast<int>(ExitCode::user_error);
    }
    for (auto* sub : app.get_subcommands()) { cfg.subcommand = sub->get_name(); }

    try {
        return detail::Runner(cfg, out, err).dispatch();
    } catch (const InconsistentProgramError& e) {
        out << "inconsistent\nwitness: " << e.witness().bits() << '\n';
        err << "error: " << e.what() << '\n';
        return static_cast<int>(e.code());
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return static_cast<int>(e.code());
    }
}

} // namespace plp::cli
