// Command-line front end for the workbench: runs a named task from a JSON
// config and/or flags, writes a report with the config hash and version, and
// prints a short summary. `relic acceptance` runs the full acceptance suite.

#include "relic/parallel.hpp"
#include "relic/tasks.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <string>

using namespace relic;

int main(int argc, char** argv) {
    CLI::App app{"workbench for finite random relational structures"};
    app.require_subcommand(1);

    std::string config_path, out_dir, format = "json";
    std::uint64_t seed = 1, samples = 10000;
    int jobs = default_jobs();
    bool exact = false;

    if (const char* env = std::getenv("RELIC_OUT_DIR")) out_dir = env;
    if (out_dir.empty()) out_dir = "reports";

    app.add_option("--config", config_path, "JSON config file (flags override fields)");
    app.add_option("--out", out_dir, "output directory for reports");
    app.add_option("--format", format, "report format: json|csv")
        ->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--seed", seed, "master random seed");
    app.add_option("--samples", samples, "Monte Carlo sample count");
    app.add_option("--jobs", jobs, "parallel worker count (results are jobs-independent)");
    app.add_flag("--exact", exact, "force exact computation where applicable");

    // per-task positional/option capture; everything lands in the config json
    json cfg;
    auto add_common = [&](CLI::App* sub, const std::string& task) {
        sub->fallthrough(); // global flags may follow the subcommand
        sub->callback([&, task]() { cfg["task"] = task; });
        return sub;
    };

    std::string structure_id, sentence_id, dist_json, reduction_id, target_json;
    std::string first_id, second_id, polynomial, domain = "integers", gadget_id, csv_path,
                csv2_path, group;
    int n = 0, k = 0, d = 2;
    double p = 0.5, q = 0.5;
    std::uint64_t s_len = 1;
    int n_lo = 0, n_hi = 0;
    std::uint64_t budget = 1ull << 26;
    bool recognizer = false, formula_flag = false, no_certificate = false;
    double eps = 0.05;

    auto* c_check = add_common(app.add_subcommand("check", "evaluate a sentence on a structure"),
                               "check");
    c_check->add_option("structure", structure_id)->required();
    c_check->add_option("sentence", sentence_id)->required();

    auto* c_count =
        add_common(app.add_subcommand("count", "count labelled models on [n]"), "count");
    c_count->add_option("--n", n)->required();
    c_count->add_option("--sentence", sentence_id)->required();
    c_count->add_flag("--recognizer", recognizer, "use the structural recognizer when available");
    c_count->add_option("--budget", budget);

    auto* c_prob = add_common(app.add_subcommand("prob", "probability of a sentence"), "prob");
    c_prob->add_option("--distribution", dist_json, "inline JSON or file")->required();
    c_prob->add_option("--sentence", sentence_id)->required();
    c_prob->add_option("--n-lo", n_lo);
    c_prob->add_option("--n-hi", n_hi);

    auto* c_sample = add_common(app.add_subcommand("sample", "draw structures"), "sample");
    c_sample->add_option("--distribution", dist_json)->required();

    auto* c_reduce =
        add_common(app.add_subcommand("reduce", "apply a reduction to a structure"), "reduce");
    c_reduce->add_option("structure", structure_id)->required();
    c_reduce->add_option("reduction", reduction_id)->required();

    auto* c_push = add_common(
        app.add_subcommand("verify-pushforward", "compare a pushforward law with a target law"),
        "verify-pushforward");
    c_push->add_option("--distribution", dist_json)->required();
    c_push->add_option("--reduction", reduction_id)->required();
    c_push->add_option("--target", target_json)->required();

    auto* c_tv = add_common(app.add_subcommand("tv", "total variation between product laws"),
                            "tv");
    c_tv->add_option("--p", p)->required();
    c_tv->add_option("--q", q)->required();
    c_tv->add_option("--s", s_len)->required();

    auto* c_c0 = add_common(app.add_subcommand("c0", "density threshold solver"), "c0");
    c_c0->add_option("--d", d)->required();
    c_c0->add_option("--group", group, "symmetric|cyclic|trivial");

    auto* c_ef = add_common(app.add_subcommand("ef", "round-limited matching game"), "ef");
    c_ef->add_option("first", first_id)->required();
    c_ef->add_option("second", second_id)->required();
    c_ef->add_option("--k", k)->required();
    c_ef->add_flag("--no-certificate", no_certificate);

    auto* c_dioph = add_common(
        app.add_subcommand("compile-dioph", "compile a polynomial equation to graph sentences"),
        "compile-dioph");
    c_dioph->add_option("polynomial", polynomial)->required();
    c_dioph->add_option("--domain", domain)->check(CLI::IsMember({"integers", "positives"}));

    auto* c_gadget =
        add_common(app.add_subcommand("gadget", "emit a named structure or formula"), "gadget");
    c_gadget->add_option("name", gadget_id)->required();
    c_gadget->add_flag("--formula", formula_flag, "emit a formula instead of a structure");

    auto* c_seq = add_common(app.add_subcommand("seq-analyze", "classify a probability sequence"),
                             "seq-analyze");
    c_seq->add_option("csv", csv_path)->required();
    c_seq->add_option("--csv2", csv2_path, "second sequence for pairwise distance");
    c_seq->add_option("--eps", eps);

    add_common(app.add_subcommand("acceptance", "run the acceptance suite"), "acceptance");

    CLI11_PARSE(app, argc, argv);

    try {
        if (!config_path.empty()) {
            json file_cfg = json::parse(read_text_file(config_path));
            for (auto& [key, val] : file_cfg.items())
                if (!cfg.contains(key)) cfg[key] = val;
        }
        // flags override config fields
        auto set_if = [&](const char* key, const json& v, bool condition) {
            if (condition) cfg[key] = v;
        };
        std::string task = cfg.value("task", "");
        set_if("structure", structure_id, !structure_id.empty());
        set_if("sentence", sentence_id, !sentence_id.empty());
        set_if("reduction", reduction_id, !reduction_id.empty());
        set_if("first", first_id, !first_id.empty());
        set_if("second", second_id, !second_id.empty());
        set_if("polynomial", polynomial, !polynomial.empty());
        set_if("domain", domain, task == "compile-dioph");
        set_if("name", gadget_id, !gadget_id.empty());
        set_if("csv", csv_path, !csv_path.empty());
        set_if("csv2", csv2_path, !csv2_path.empty());
        set_if("group", group, !group.empty());
        set_if("n", n, n > 0);
        set_if("k", k, task == "ef");
        set_if("d", d, task == "c0");
        set_if("p", p, task == "tv");
        set_if("q", q, task == "tv");
        set_if("s", s_len, task == "tv");
        set_if("eps", eps, task == "seq-analyze");
        set_if("budget", budget, task == "count");
        set_if("recognizer", recognizer, recognizer);
        set_if("formula", formula_flag, formula_flag);
        set_if("certificate", !no_certificate, task == "ef");
        set_if("exact", exact, app.count("--exact") > 0);
        set_if("seed", seed, app.count("--seed") > 0 || !cfg.contains("seed"));
        set_if("samples", samples, app.count("--samples") > 0 || !cfg.contains("samples"));
        if (n_lo > 0) cfg["n_lo"] = n_lo;
        if (n_hi > 0) cfg["n_hi"] = n_hi;
        if (!dist_json.empty()) {
            if (dist_json.size() > 5 && dist_json.substr(dist_json.size() - 5) == ".json")
                cfg["distribution"] = json::parse(read_text_file(dist_json));
            else
                cfg["distribution"] = json::parse(dist_json);
        }
        if (!target_json.empty()) {
            if (target_json.size() > 5 && target_json.substr(target_json.size() - 5) == ".json")
                cfg["target"] = json::parse(read_text_file(target_json));
            else
                cfg["target"] = json::parse(target_json);
        }

        TaskOutput out = run_task(cfg, jobs);
        std::string path = write_report(out, out_dir, format);

        if (cfg["task"] == "acceptance") {
            int fails = 0;
            for (const auto& r : out.report.at("criteria")) {
                bool pass = r.at("pass").get<bool>();
                if (!pass) ++fails;
                std::cout << (pass ? "PASS" : "FAIL") << "  " << r.at("id").get<int>() << "  "
                          << r.at("name").get<std::string>() << "  ("
                          << r.at("seconds").get<double>() << "s)  "
                          << r.at("detail").get<std::string>() << "\n";
            }
            std::cout << "report: " << path << "\n";
            return fails == 0 ? 0 : 1;
        }
        // single-line summary of the most relevant field
        for (const char* key : {"value", "count", "tv_zero", "winner", "classification",
                                "c0_symmetric", "tv_exact"})
            if (out.report.contains(key)) {
                std::cout << key << ": " << out.report.at(key).dump() << "\n";
                break;
            }
        std::cout << "report: " << path << "\n";
        return 0;
    } catch (const BudgetExceeded& e) {
        std::cerr << "budget refusal: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
