#pragma once

#include "relic/acceptance.hpp"
#include "relic/json_io.hpp"
#include "relic/registry.hpp"
#include "relic/version.hpp"

#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

namespace relic {

// stable hex digest of the canonical config serialization, embedded in reports
inline std::string config_hash(const json& config) {
    std::string s = config.dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
}

struct TaskOutput {
    json report;
    std::string csv; // optional ProbSeq payload
};

namespace task_detail {

inline Structure load_structure(const json& cfg, const std::string& key) {
    const json& v = cfg.at(key);
    if (v.is_string()) {
        std::string s = v.get<std::string>();
        if (s.size() > 5 && s.substr(s.size() - 5) == ".json")
            return structure_from_json(json::parse(read_text_file(s)));
        return build_gadget(s);
    }
    return structure_from_json(v);
}

inline FormulaPtr load_sentence(const json& cfg, const std::string& key, const Signature& sig) {
    std::string s = cfg.at(key).get<std::string>();
    if (!s.empty() && s[0] == '(') return parse(s, sig);
    return build_gadget_formula(s);
}

inline ReductionSpec load_reduction(const json& cfg, const std::string& key) {
    const json& v = cfg.at(key);
    if (v.is_string()) {
        std::string s = v.get<std::string>();
        if (s.size() > 5 && s.substr(s.size() - 5) == ".json")
            return reduction_from_json(json::parse(read_text_file(s)));
        return build_named_reduction(s);
    }
    return reduction_from_json(v);
}

inline json spoiler_tree(const SpoilerMove& mv) {
    json replies = json::object();
    for (const auto& [v, sub] : mv.replies)
        replies[std::to_string(v + 1)] = sub ? spoiler_tree(*sub) : json(nullptr);
    return json{{"side", mv.in_first ? "first" : "second"},
                {"vertex", mv.vertex + 1},
                {"replies", replies}};
}

} // namespace task_detail

// Runs one named task. Exit-code mapping is the caller's job; budget refusals
// surface as BudgetExceeded.
inline TaskOutput run_task(const json& cfg, int jobs) {
    using namespace task_detail;
    TaskOutput out;
    std::string task = cfg.at("task").get<std::string>();
    json& rep = out.report;
    rep["task"] = task;
    rep["version"] = kVersion;
    rep["config"] = cfg;
    rep["config_hash"] = config_hash(cfg);

    if (task == "check") {
        Structure st = load_structure(cfg, "structure");
        FormulaPtr f = load_sentence(cfg, "sentence", *st.signature());
        rep["value"] = eval(st, f);
    } else if (task == "count") {
        int n = cfg.at("n").get<int>();
        std::string sname = cfg.at("sentence").get<std::string>();
        std::uint64_t budget = cfg.value("budget", 1ull << 26);
        std::uint64_t count;
        if (cfg.value("recognizer", false) && sname == "phi1") {
            count = count_models_with(Signature::graph(), n, expansion_recognize, budget, jobs);
        } else {
            FormulaPtr f = load_sentence(cfg, "sentence", *Signature::graph());
            count = count_models(Signature::graph(), n, f, budget, jobs);
        }
        rep["count"] = count;
    } else if (task == "prob") {
        DistributionSpec base = dist_from_json(cfg.at("distribution"));
        FormulaPtr f = load_sentence(cfg, "sentence", *base.sig);
        bool exact = cfg.value("exact", true);
        std::uint64_t samples = cfg.value("samples", std::uint64_t{10000});
        std::uint64_t seed = cfg.value("seed", std::uint64_t{1});
        int n_lo = cfg.value("n_lo", base.n), n_hi = cfg.value("n_hi", base.n);
        ProbSeq seq;
        seq.sentence_id = cfg.at("sentence").get<std::string>();
        seq.distribution_id = base.name;
        json values = json::array();
        for (int n = n_lo; n <= n_hi; ++n) {
            DistributionSpec spec = base;
            spec.n = n;
            ProbValue v = prob(f, spec, exact, samples, seed, jobs);
            seq.add(n, v);
            json e = prob_value_to_json(v);
            e["n"] = n;
            e["sentence"] = seq.sentence_id;
            values.push_back(e);
        }
        rep["values"] = values;
        out.csv = probseq_to_csv(seq);
    } else if (task == "sample") {
        DistributionSpec spec = dist_from_json(cfg.at("distribution"));
        std::uint64_t seed = cfg.value("seed", std::uint64_t{1});
        std::uint64_t samples = cfg.value("samples", std::uint64_t{1});
        json arr = json::array();
        for (std::uint64_t k = 0; k < samples; ++k) {
            Rng rng = Rng::stream(seed, k);
            arr.push_back(structure_to_json(sample(spec, rng)));
        }
        rep["samples"] = arr;
    } else if (task == "reduce") {
        Structure st = load_structure(cfg, "structure");
        ReductionSpec r = load_reduction(cfg, "reduction");
        rep["result"] = structure_to_json(apply_reduction(st, r));
    } else if (task == "verify-pushforward") {
        DistributionSpec src = dist_from_json(cfg.at("distribution"));
        ReductionSpec r = load_reduction(cfg, "reduction");
        DistributionSpec tgt = dist_from_json(cfg.at("target"));
        Rational tv = law_tv(pushforward_law(src, r), exact_law(tgt));
        rep["tv"] = rational_to_json(tv);
        rep["tv_zero"] = tv == 0;
    } else if (task == "tv") {
        double p = cfg.at("p").get<double>();
        double q = cfg.at("q").get<double>();
        std::uint64_t s = cfg.at("s").get<std::uint64_t>();
        rep["tv_exact"] = tv_exact(p, q, s);
        rep["tv_condition"] = tv_condition(p, q, s);
        if (s <= 20) rep["tv_brute"] = tv_brute(p, q, static_cast<int>(s));
    } else if (task == "c0") {
        int d = cfg.at("d").get<int>();
        rep["c0_symmetric"] = solve_c0(d);
        if (cfg.contains("group")) {
            std::string g = cfg.at("group").get<std::string>();
            PermGroup grp = g == "cyclic"    ? PermGroup::cyclic(d)
                            : g == "trivial" ? PermGroup::trivial(d)
                                             : PermGroup::symmetric(d);
            rep["c0_group"] = c0_for_group(grp, d);
            rep["group_order"] = grp.order();
        }
    } else if (task == "ef") {
        Structure g = load_structure(cfg, "first");
        Structure h = load_structure(cfg, "second");
        int k = cfg.at("k").get<int>();
        EfGame game(g, h);
        EfResult r = game.solve(k, cfg.value("certificate", true));
        rep["winner"] = r.duplicator_wins ? "duplicator" : "spoiler";
        if (r.certificate) rep["spoiler_moves"] = task_detail::spoiler_tree(*r.certificate);
    } else if (task == "compile-dioph") {
        std::string poly = cfg.at("polynomial").get<std::string>();
        DiophDomain dom = cfg.value("domain", std::string("integers")) == "positives"
                              ? DiophDomain::Positives
                              : DiophDomain::Integers;
        auto comp = compile_diophantine(poly, dom);
        json sys;
        sys["total_vars"] = comp.system.total_vars;
        sys["occurrences"] = comp.system.occurrences;
        sys["labels"] = comp.system.labels;
        json eqs = json::array();
        for (const auto& e : comp.system.copies)
            eqs.push_back(json{{"kind", "copy"}, {"d", e.d}, {"i", e.i}});
        for (const auto& e : comp.system.ops)
            eqs.push_back(json{{"kind", e.kind == DiophEquation::Kind::Sum ? "sum" : "prod"},
                               {"d", e.d},
                               {"i", e.i},
                               {"j", e.j}});
        sys["equations"] = eqs;
        sys["final"] = json{{"q", comp.system.q}, {"p", comp.system.p}};
        rep["system"] = sys;
        rep["psi"] = render(comp.psi);
        rep["phi"] = render(comp.phi);
    } else if (task == "gadget") {
        std::string id = cfg.at("name").get<std::string>();
        if (cfg.value("formula", false)) {
            rep["formula"] = render(build_gadget_formula(id));
        } else {
            rep["structure"] = structure_to_json(build_gadget(id));
        }
    } else if (task == "seq-analyze") {
        ProbSeq x;
        if (cfg.contains("csv")) {
            std::istringstream in(read_text_file(cfg.at("csv").get<std::string>()));
            x = probseq_from_csv(in);
        } else {
            for (const auto& e : cfg.at("entries")) {
                ProbValue v;
                v.exact = false;
                v.value_mc = e.at(1).get<double>();
                x.add(e.at(0).get<int>(), v);
            }
        }
        std::optional<ProbSeq> y;
        if (cfg.contains("csv2")) {
            std::istringstream in(read_text_file(cfg.at("csv2").get<std::string>()));
            y = probseq_from_csv(in);
        }
        int lo = cfg.value("window_lo", x.entries.begin()->first);
        int hi = cfg.value("window_hi", x.entries.rbegin()->first);
        double eps = cfg.value("eps", 0.05);
        SeqAnalysis a = seq_analyze(x, y ? &*y : nullptr, lo, hi, eps);
        rep["classification"] = seq_law_name(a.law);
        rep["limsup_distance"] = a.limsup_distance;
        rep["oscillation"] = a.oscillation;
    } else if (task == "acceptance") {
        std::uint64_t seed = cfg.value("seed", std::uint64_t{20240601});
        auto results = run_acceptance(seed, jobs);
        json arr = json::array();
        int fails = 0;
        for (const auto& r : results) {
            arr.push_back(json{{"id", r.id},
                               {"name", r.name},
                               {"pass", r.pass},
                               {"seconds", r.seconds},
                               {"detail", r.detail}});
            if (!r.pass) ++fails;
        }
        rep["criteria"] = arr;
        rep["failures"] = fails;
    } else {
        throw std::invalid_argument("unknown task: " + task);
    }
    return out;
}

inline std::string write_report(const TaskOutput& out, const std::string& out_dir,
                                const std::string& format) {
    std::filesystem::create_directories(out_dir);
    std::string base = out.report.at("task").get<std::string>() + "-" +
                       out.report.at("config_hash").get<std::string>();
    std::string path = out_dir + "/" + base + ".json";
    write_text_file(path, out.report.dump(2) + "\n");
    if (format == "csv" && !out.csv.empty())
        write_text_file(out_dir + "/" + base + ".csv", out.csv);
    return path;
}

} // namespace relic
