#include "entwit/cli.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "entwit/analyzer.hpp"
#include "entwit/catalog.hpp"
#include "entwit/errors.hpp"
#include "entwit/legendre.hpp"
#include "entwit/operator_io.hpp"
#include "entwit/sep_value.hpp"

namespace entwit::cli {

namespace {

using nlohmann::json;

LegendreOptions legendre_options(const RunConfig& cfg) {
    LegendreOptions o;
    o.restarts = cfg.restarts;
    o.rel_tol = cfg.tolerances.rel;
    o.seed = cfg.seed;
    o.threads = cfg.threads;
    return o;
}

SepOptions sep_options(const RunConfig& cfg) {
    SepOptions o;
    o.restarts = cfg.restarts;
    o.rel_tol = cfg.tolerances.rel;
    o.seed = cfg.seed;
    o.threads = cfg.threads;
    return o;
}

json vec_to_json(const Vec& v) {
    json a = json::array();
    for (const cplx& z : v) a.push_back({z.real(), z.imag()});
    return a;
}

std::string format_cvec(const Vec& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ", ";
        s += io::format_sig(v[i].real());
        s += v[i].imag() < 0 ? '-' : '+';
        s += io::format_sig(std::abs(v[i].imag()));
        s += 'i';
    }
    return s + "]";
}

json terms_to_json(const std::vector<SepTerm>& terms) {
    json a = json::array();
    for (const SepTerm& t : terms)
        a.push_back({{"weight", t.weight}, {"A", vec_to_json(t.local_a)}, {"B", vec_to_json(t.local_b)}});
    return a;
}

void print_terms(std::ostream& out, const std::vector<SepTerm>& terms) {
    for (std::size_t i = 0; i < terms.size(); ++i) {
        out << "term " << i << ": weight = " << io::format_sig(terms[i].weight) << "\n"
            << "  A = " << format_cvec(terms[i].local_a) << "\n"
            << "  B = " << format_cvec(terms[i].local_b) << "\n";
    }
}

void emit(const RunConfig& cfg, std::ostream& out, const json& report,
          const std::string& text) {
    if (cfg.json)
        out << report.dump(2) << "\n";
    else
        out << text;
}

struct BoundArgs {
    double c = 0, l = 0;
    std::string observables;
    bool closed_form = false;
};

int cmd_bound(const RunConfig& cfg, const BoundArgs& a, std::ostream& out) {
    if (a.closed_form) {
        if (!a.observables.empty())
            throw ValidationError("--closed-form applies to the built-in ZZ/XX pair only");
        const double eps = xxzz_closed_form(a.c, a.l);
        emit(cfg, out, json{{"epsilon", eps}, {"closed_form", true}},
             io::format_sig(eps) + "\n");
        return 0;
    }
    std::optional<CatalogEntry> builtin;
    std::optional<io::ParsedPair> pair;
    if (a.observables.empty())
        builtin.emplace(catalog("xxzz"));
    else
        pair.emplace(io::parse_pair(io::read_file(a.observables)));
    const BipartiteOperator& c_op = builtin ? builtin->c_op : pair->c.op;
    const BipartiteOperator& l_op = builtin ? builtin->l_op : pair->l.op;

    BoundOptions bo;
    bo.inner = legendre_options(cfg);
    bo.outer_tol = cfg.tolerances.outer;
    const BoundResult r = eps_bound(a.c, a.l, c_op, l_op, bo);
    if (!r.feasible)
        throw InfeasibleError("(c, l) lies outside the joint spectral range of the observables");

    std::ostringstream text;
    text << io::format_sig(r.epsilon) << "\n"
         << "alpha = " << io::format_sig(r.alpha_star) << "\n"
         << "beta = " << io::format_sig(r.beta_star) << "\n"
         << "certified = " << (r.certified ? "true" : "false") << "\n";
    emit(cfg, out,
         json{{"epsilon", r.epsilon},
              {"alpha", r.alpha_star},
              {"beta", r.beta_star},
              {"certified", r.certified},
              {"evaluations", r.evaluations}},
         text.str());
    return 0;
}

int cmd_fig1(const RunConfig& cfg, int resolution, const std::string& out_path,
             std::ostream& out) {
    const std::vector<Fig1Row> rows = fig1_grid(resolution);
    std::ostringstream csv;
    io::write_fig1_csv(csv, rows);
    io::write_file(out_path, csv.str());
    std::ostringstream text;
    text << "wrote " << out_path << " (" << rows.size() << " rows)\n";
    emit(cfg, out,
         json{{"out", out_path}, {"resolution", resolution}, {"rows", rows.size()}},
         text.str());
    return 0;
}

int cmd_sep_max(const RunConfig& cfg, const std::string& op_path, std::ostream& out) {
    const io::ParsedOperator po = io::load_operator(op_path);
    const SepOptResult r = sep_max(po.op, sep_options(cfg));
    std::ostringstream text;
    text << "g_sep = " << io::format_sig(r.value) << "\n"
         << "restarts = " << r.restarts << "\n";
    print_terms(text, r.optimizer);
    emit(cfg, out,
         json{{"value", r.value},
              {"restarts", r.restarts},
              {"found", r.found},
              {"optimizer", terms_to_json(r.optimizer)}},
         text.str());
    return 0;
}

int cmd_witness(const RunConfig& cfg, const std::string& op_path, std::ostream& out) {
    const io::ParsedOperator po = io::load_operator(op_path);
    const WitnessReport r = is_witness(po.op, sep_options(cfg));
    std::ostringstream text;
    text << "sep_min = " << io::format_sig(r.sep_min) << "\n"
         << "min_eigenvalue = " << io::format_sig(r.min_eigenvalue) << "\n"
         << "witness = " << (r.is_witness ? "true" : "false") << "\n";
    emit(cfg, out,
         json{{"sep_min", r.sep_min},
              {"min_eigenvalue", r.min_eigenvalue},
              {"is_witness", r.is_witness}},
         text.str());
    return 0;
}

struct UewArgs {
    std::string l_path, c_path;
    double c = 0;
    std::optional<double> l;
};

int cmd_uew(const RunConfig& cfg, const UewArgs& a, std::ostream& out) {
    const io::ParsedOperator l_doc = io::load_operator(a.l_path, io::PairSlot::L);
    const io::ParsedOperator c_doc = io::load_operator(a.c_path, io::PairSlot::C);
    const UewReport r = uew_evaluate(l_doc.op, c_doc.op, a.c, a.l, sep_options(cfg));
    std::ostringstream text;
    text << "g_c = " << io::format_sig(r.g_c) << "\n"
         << "primal = " << io::format_sig(r.primal_value) << "\n"
         << "certified_gap = " << io::format_sig(r.certified_gap) << "\n"
         << "hyperplane_min = " << io::format_sig(r.hyperplane_minimum) << "\n";
    if (r.detected) text << "detected = " << (*r.detected ? "yes" : "no") << "\n";
    json report{{"c", r.c},
                {"g_c", r.g_c},
                {"primal", r.primal_value},
                {"certified_gap", r.certified_gap},
                {"hyperplane_min", r.hyperplane_minimum}};
    report["l"] = r.l ? json(*r.l) : json(nullptr);
    report["detected"] = r.detected ? json(*r.detected) : json(nullptr);
    emit(cfg, out, report, text.str());
    return 0;
}

struct ScanArgs {
    std::string c_path, l_path, out_path;
};

int cmd_scan(const RunConfig& cfg, const ScanArgs& a, std::ostream& out) {
    const io::ParsedOperator c_doc = io::load_operator(a.c_path, io::PairSlot::C);
    const io::ParsedOperator l_doc = io::load_operator(a.l_path, io::PairSlot::L);
    const std::vector<double> grid = linspace(cfg.grid.min, cfg.grid.max, cfg.grid.steps);
    const ScanResult scan = lambda_scan(c_doc.op, l_doc.op, grid);

    std::ostringstream csv;
    io::write_scan_csv(csv, scan);
    io::write_file(a.out_path, csv.str());

    std::size_t rows = 0;
    std::map<std::string, std::size_t> classes;
    for (const ScanRecord& rec : scan.per_lambda) {
        rows += rec.classes.size();
        for (StateClass c : rec.classes) ++classes[to_string(c)];
    }
    std::ostringstream text;
    text << "wrote " << a.out_path << " (" << rows << " rows)\nclasses:";
    for (const auto& [name, count] : classes) text << ' ' << name << '=' << count;
    text << "\n";
    emit(cfg, out, json{{"out", a.out_path}, {"rows", rows}, {"classes", classes}},
         text.str());
    return 0;
}

const ProductObservable& require_factors(const io::ParsedOperator& doc, const char* which) {
    if (!doc.factors)
        throw ValidationError(std::string(which) +
                              " must be given in factor form for structural analysis");
    return *doc.factors;
}

int cmd_analyze(const RunConfig& cfg, const std::string& c_path, const std::string& l_path,
                std::ostream& out) {
    const io::ParsedOperator c_doc = io::load_operator(c_path, io::PairSlot::C);
    const io::ParsedOperator l_doc = io::load_operator(l_path, io::PairSlot::L);
    const ProductObservable& c_obs = require_factors(c_doc, "--C");
    const ProductObservable& l_obs = require_factors(l_doc, "--L");

    AnalyzerOptions opt;
    const Verdict v = usefulness_verdict(c_obs, l_obs, opt);
    const CommutatorVerdict cv = commutator_verdict(c_obs, l_obs);

    std::ostringstream text;
    text << "verdict = " << to_string(v.kind) << "\n"
         << "commutator_norms: A = " << io::format_sig(cv.norm_a)
         << ", B = " << io::format_sig(cv.norm_b) << "\n";
    if (v.witness_slopes)
        text << "witness_slopes: alpha = " << io::format_sig(v.witness_slopes->first)
             << ", beta = " << io::format_sig(v.witness_slopes->second) << "\n";
    text << "extremal_negativity = " << io::format_sig(v.extremal_negativity) << "\n"
         << "evidence: " << v.evidence << "\n";

    json report{{"verdict", to_string(v.kind)},
                {"commutator", json{{"A", cv.norm_a}, {"B", cv.norm_b}}},
                {"extremal_negativity", v.extremal_negativity},
                {"evidence", v.evidence}};
    report["witness_slopes"] =
        v.witness_slopes ? json{v.witness_slopes->first, v.witness_slopes->second}
                         : json(nullptr);
    emit(cfg, out, report, text.str());
    return 0;
}

int cmd_catalog(const RunConfig& cfg, const std::string& name, const std::string& out_path,
                std::ostream& out) {
    CatalogEntry entry = catalog(name);
    io::ParsedPair pair{
        io::ParsedOperator{std::move(entry.c_op), std::move(entry.c_factors), entry.name + ".C",
                           entry.description},
        io::ParsedOperator{std::move(entry.l_op), std::move(entry.l_factors), entry.name + ".L",
                           entry.description}};
    const std::string text = io::serialize_pair(pair);
    if (!out_path.empty()) {
        io::write_file(out_path, text);
        std::ostringstream note;
        note << "wrote " << out_path << "\n";
        emit(cfg, out, json{{"out", out_path}, {"name", name}}, note.str());
    } else {
        out << text;
    }
    return 0;
}

}  // namespace

void RunConfig::validate() const {
    if (restarts <= 0) throw ValidationError("restarts must be positive");
    if (threads <= 0) throw ValidationError("threads must be positive");
    for (double t : {tolerances.rel, tolerances.outer})
        if (!(t > 0 && t < 1)) throw ValidationError("tolerances must lie in (0, 1)");
    if (grid.steps < 2) throw ValidationError("lambda grid needs at least 2 steps");
    if (!(grid.max > grid.min)) throw ValidationError("lambda-max must exceed lambda-min");
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"entanglement witness toolbox: separable bounds, geometric-measure "
                 "lower bounds, and observable-pair diagnostics"};
    app.name("entwit");
    app.fallthrough();
    app.require_subcommand(1);

    RunConfig cfg;
    app.add_option("--seed", cfg.seed, "seed for the deterministic restart sampler")
        ->envname("ENTWIT_SEED");
    app.add_option("--restarts", cfg.restarts, "multi-start count for see-saw searches");
    app.add_option("--threads", cfg.threads, "worker threads for independent restarts");
    app.add_option("--rel-tol", cfg.tolerances.rel, "see-saw relative improvement threshold");
    app.add_option("--outer-tol", cfg.tolerances.outer, "slope-search improvement threshold");
    app.add_flag("--json", cfg.json, "emit a machine-readable JSON report");

    BoundArgs bound_args;
    auto* bound = app.add_subcommand("bound", "lower-bound the geometric measure from <C>, <L>");
    bound->add_option("--c", bound_args.c, "measured expectation of C")->required();
    bound->add_option("--l", bound_args.l, "measured expectation of L")->required();
    bound->add_option("--observables", bound_args.observables,
                      "pair document with observables C and L (default: built-in ZZ/XX)");
    bound->add_flag("--closed-form", bound_args.closed_form,
                    "evaluate the ZZ/XX closed form instead of the search");

    int fig1_resolution = 0;
    std::string fig1_out;
    auto* fig1 = app.add_subcommand("fig1", "tabulate the ZZ/XX closed-form bound on a grid");
    fig1->add_option("--resolution", fig1_resolution, "grid points per axis")->required();
    fig1->add_option("--out", fig1_out, "CSV output path")->required();

    std::string sep_op_path;
    auto* sep = app.add_subcommand("sep-max", "maximize <X> over product states");
    sep->add_option("--op", sep_op_path, "operator document")->required();

    std::string wit_op_path;
    auto* wit = app.add_subcommand("witness", "test whether an operator is an entanglement witness");
    wit->add_option("--op", wit_op_path, "operator document")->required();

    UewArgs uew_args;
    double uew_l = 0;
    auto* uew = app.add_subcommand("uew", "constrained separable bound and witness hyperplane");
    uew->add_option("--L", uew_args.l_path, "objective operator document")->required();
    uew->add_option("--C", uew_args.c_path, "constraint operator document")->required();
    uew->add_option("--c", uew_args.c, "constraint value Tr(rho C)")->required();
    auto* uew_l_opt = uew->add_option("--l", uew_l, "measured Tr(rho L) to test for detection");

    ScanArgs scan_args;
    auto* scan = app.add_subcommand("scan", "classify the spectrum of C + lambda L over a grid");
    scan->add_option("--C", scan_args.c_path, "constraint operator document")->required();
    scan->add_option("--L", scan_args.l_path, "perturbation operator document")->required();
    scan->add_option("--lambda-min", cfg.grid.min, "grid lower end");
    scan->add_option("--lambda-max", cfg.grid.max, "grid upper end");
    scan->add_option("--steps", cfg.grid.steps, "grid size");
    scan->add_option("--out", scan_args.out_path, "CSV output path")->required();

    std::string analyze_c, analyze_l;
    auto* analyze = app.add_subcommand("analyze", "usefulness verdict for an observable pair");
    analyze->add_option("--C", analyze_c, "factor-form operator document")->required();
    analyze->add_option("--L", analyze_l, "factor-form operator document")->required();

    std::string catalog_name, catalog_out;
    std::string catalog_help = "built-in operator pair; one of:";
    for (const std::string& n : catalog_names()) catalog_help += " " + n;
    auto* cat = app.add_subcommand("catalog", "emit a built-in operator pair document");
    cat->add_option("name", catalog_name, catalog_help)->required();
    cat->add_option("--out", catalog_out, "write the pair document here instead of stdout");

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e, out, err);
        return rc == 0 ? 0 : 2;
    }

    try {
        cfg.validate();
        if (bound->parsed()) return cmd_bound(cfg, bound_args, out);
        if (fig1->parsed()) return cmd_fig1(cfg, fig1_resolution, fig1_out, out);
        if (sep->parsed()) return cmd_sep_max(cfg, sep_op_path, out);
        if (wit->parsed()) return cmd_witness(cfg, wit_op_path, out);
        if (uew->parsed()) {
            if (uew_l_opt->count() > 0) uew_args.l = uew_l;
            return cmd_uew(cfg, uew_args, out);
        }
        if (scan->parsed()) return cmd_scan(cfg, scan_args, out);
        if (analyze->parsed()) return cmd_analyze(cfg, analyze_c, analyze_l, out);
        if (cat->parsed()) return cmd_catalog(cfg, catalog_name, catalog_out, out);
        err << "error: no subcommand selected\n";
        return 2;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    } catch (const InfeasibleError& e) {
        err << "error: " << e.what() << "\n";
        return 4;
    } catch (const ConvergenceError& e) {
        err << "error: " << e.what() << "\n";
        return 5;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace entwit::cli
