// dpcr-cli: experiment runner for the continual-release mechanisms and the
// hard-instance harness. Every subcommand is deterministic given its flags
// and seed; outputs are CSV (schema named in a leading comment line) or
// JSON-lines for gadget timetables.
#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "dpcr/graph_mechanisms.hpp"
#include "dpcr/reduction.hpp"
#include "dpcr/sne.hpp"

using namespace dpcr;
using nlohmann::json;

namespace {

struct OutputFile {
    std::ofstream file;
    std::ostream& stream() { return file.is_open() ? file : std::cout; }
    void open(const std::string& path) {
        if (path.empty()) return;
        file.open(path);
        if (!file) throw CLI::RuntimeError("cannot open output file: " + path, 2);
    }
};

UpdateStream load_stream(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CLI::RuntimeError("stream file not found: " + path, 2);
    return read_stream(in);
}

NoiseMode parse_noise(const std::string& s) {
    if (s == "standard") return NoiseMode::Standard;
    if (s == "off") return NoiseMode::Off;
    throw CLI::ValidationError("--noise must be 'standard' or 'off'");
}

NormSpec parse_norm(const std::string& s) {
    if (s == "l1") return NormSpec::l1();
    if (s == "l2") return NormSpec::l2();
    if (s.rfind("lp:", 0) == 0) return NormSpec::lp(std::stod(s.substr(3)));
    if (s.rfind("top", 0) == 0) return NormSpec::topk(std::stoi(s.substr(3)));
    throw CLI::ValidationError("unknown norm: " + s +
                               " (use l1, l2, lp:<p>, top<k>)");
}

GadgetKind parse_gadget(const std::string& s) {
    if (s == "matching") return GadgetKind::Matching;
    if (s == "kcore") return GadgetKind::KCore;
    if (s == "deghist") return GadgetKind::DegHist;
    throw CLI::ValidationError("unknown gadget: " + s);
}

MsfProblem parse_msf(const std::string& s) {
    if (s == "st-mincut") return MsfProblem::StMincut;
    if (s == "mincut") return MsfProblem::Mincut;
    if (s == "deg-atleast") return MsfProblem::DegAtLeast;
    if (s == "kcore") return MsfProblem::KCore;
    if (s == "edge-count") return MsfProblem::EdgeCount;
    if (s == "zb-matching") return MsfProblem::ZeroBasedMatching;
    if (s == "zb-triangle") return MsfProblem::ZeroBasedTriangle;
    throw CLI::ValidationError("unknown msf problem: " + s);
}

// ---------------------------------------------------------------------------

struct MechanismArgs {
    std::string mechanism, stream_path, noise = "standard", out_path;
    double eps = 1.0, delta = 0.0, beta = 0.05;
    uint64_t seed = 1;
    int trials = 1;
};

int run_mechanism(const MechanismArgs& a) {
    UpdateStream s = load_stream(a.stream_path);
    PrivacyBudget budget;
    budget.epsilon = a.eps;
    budget.delta = a.delta;
    budget.beta = a.beta;
    budget.noise_mode = parse_noise(a.noise);

    OutputFile out;
    out.open(a.out_path);
    std::ostream& os = out.stream();
    os << "# schema run-mechanism v1: trial,t,true,released,abs_error\n";
    os.precision(17);

    for (int trial = 0; trial < a.trials; ++trial) {
        RandomSource rng(a.seed + static_cast<uint64_t>(trial));
        auto row = [&](int64_t t, double truth, double released) {
            os << trial << ',' << t << ',' << truth << ',' << released << ','
               << std::abs(released - truth) << '\n';
        };
        if (a.mechanism == "counter") {
            if (s.kind != StreamKind::Elements)
                throw CLI::RuntimeError("counter needs an element stream", 1);
            TreeCounter tc(s.horizon, budget.epsilon, rng, budget.noise_mode);
            double truth = 0;
            for (int64_t t = 0; t < s.horizon; ++t) {
                const Update& u = s.updates[t];
                double v = u.kind == Update::Kind::InsertElement   ? 1.0
                           : u.kind == Update::Kind::DeleteElement ? -1.0
                                                                   : 0.0;
                truth += v;
                row(t + 1, truth, tc.step(v));
            }
        } else if (a.mechanism == "histogram") {
            if (s.kind != StreamKind::Elements)
                throw CLI::RuntimeError("histogram needs an element stream", 1);
            HistogramMechanism h(static_cast<int>(s.universe), s.horizon, budget,
                                 rng);
            for (int64_t t = 0; t < s.horizon; ++t) {
                const Update& u = s.updates[t];
                const std::vector<double>* outv;
                if (u.kind == Update::Kind::InsertElement)
                    outv = &h.step(static_cast<int>(u.a), 1.0);
                else if (u.kind == Update::Kind::DeleteElement)
                    outv = &h.step(static_cast<int>(u.a), -1.0);
                else
                    outv = &h.step_noop();
                auto f = prefix_frequencies(s, t + 1);
                double worst = 0, truth = 0, released = 0;
                for (size_t c = 0; c < f.size(); ++c) {
                    double err = std::abs((*outv)[c] - static_cast<double>(f[c]));
                    if (err >= worst) {
                        worst = err;
                        truth = static_cast<double>(f[c]);
                        released = (*outv)[c];
                    }
                }
                row(t + 1, truth, released);  // worst column this step
            }
        } else if (a.mechanism.rfind("ladder-", 0) == 0) {
            if (s.kind != StreamKind::Graph)
                throw CLI::RuntimeError("ladder needs a graph stream", 1);
            LadderSpec spec;
            std::string target = a.mechanism.substr(7);
            if (target == "matching")
                spec.target = LadderSpec::Target::Matching;
            else if (target == "kcore")
                spec.target = LadderSpec::Target::KCoreOfVertex;
            else if (target == "components")
                spec.target = LadderSpec::Target::Components;
            else
                throw CLI::RuntimeError("unknown ladder target: " + target, 1);
            spec.n = static_cast<int>(s.universe);
            spec.horizon = s.horizon;
            LadderMechanism lad(spec, budget, rng);
            for (int64_t t = 0; t < s.horizon; ++t) {
                double released = lad.step(s.updates[t]);
                row(t + 1, lad.true_value(), released);
            }
        } else if (a.mechanism == "degree-histogram") {
            if (s.kind != StreamKind::Graph)
                throw CLI::RuntimeError("degree-histogram needs a graph stream", 1);
            PrivateDegreeHistogram dh(static_cast<int>(s.universe), s.horizon,
                                      budget, rng);
            DynamicGraph g(static_cast<int>(s.universe));
            for (int64_t t = 0; t < s.horizon; ++t) {
                const auto& outv = dh.step(s.updates[t]);
                g.apply(s.updates[t]);
                auto h = degree_histogram(g);
                double worst = 0, truth = 0, released = 0;
                for (size_t deg = 1; deg < h.size(); ++deg) {
                    double err = std::abs(outv[deg] - static_cast<double>(h[deg]));
                    if (err >= worst) {
                        worst = err;
                        truth = static_cast<double>(h[deg]);
                        released = outv[deg];
                    }
                }
                row(t + 1, truth, released);  // worst degree class this step
            }
        } else {
            throw CLI::RuntimeError("unknown mechanism: " + a.mechanism, 1);
        }
    }
    return 0;
}

// ---------------------------------------------------------------------------

struct ReductionArgs {
    std::string gadget, oracle = "exact", noise = "standard", out_path;
    int d = 4, m = 0;
    double eps = 1.0, delta = 0.0, alpha = 0.0;
    uint64_t seed = 1;
};

int run_reduction(const ReductionArgs& a) {
    int m = a.m > 0 ? a.m : a.d;
    InnerProductInstance ip =
        InnerProductInstance::random(a.d, m, RandomSource(a.seed));

    OutputFile out;
    out.open(a.out_path);
    std::ostream& os = out.stream();
    os << "# schema run-reduction v1: j,true,decoded,error\n";
    os.precision(17);

    ReductionResult res;
    if (a.gadget == "topk") {
        TopKReductionInstance inst = build_topk_reduction(ip);
        res = run_topk_reduction(inst, exact_topk_responder, a.alpha);
    } else {
        GadgetInstance g = build_gadget(parse_gadget(a.gadget), ip);
        if (a.oracle == "exact") {
            ExactGraphOracle oracle(static_cast<int>(g.stream.universe));
            res = run_inc_reduction(g, oracle);
        } else if (a.oracle == "ladder") {
            if (g.kind == GadgetKind::DegHist)
                throw CLI::RuntimeError("ladder answers scalar statistics only", 1);
            LadderSpec spec;
            spec.target = g.kind == GadgetKind::Matching
                              ? LadderSpec::Target::Matching
                              : LadderSpec::Target::KCoreOfVertex;
            spec.vertex = g.designated_vertex;
            spec.n = static_cast<int>(g.stream.universe);
            spec.horizon = g.stream.horizon;
            PrivacyBudget budget;
            budget.epsilon = a.eps;
            budget.delta = a.delta;
            budget.noise_mode = parse_noise(a.noise);
            LadderQueryMechanism mech(spec, budget, RandomSource(a.seed + 1));
            res = run_inc_reduction(g, mech);
        } else {
            throw CLI::RuntimeError("unknown oracle: " + a.oracle, 1);
        }
    }

    double sum = 0;
    for (size_t j = 0; j < res.decoded.size(); ++j) {
        double err = std::abs(res.decoded[j] - static_cast<double>(res.truth[j]));
        sum += err;
        os << (j + 1) << ',' << res.truth[j] << ',' << res.decoded[j] << ','
           << err << '\n';
    }
    os << "# max_error=" << res.max_error
       << " mean_error=" << (res.decoded.empty() ? 0.0 : sum / res.decoded.size())
       << '\n';

    if (a.oracle == "exact" && res.max_error != 0.0)
        throw CLI::RuntimeError("exact oracle round trip failed", 1);
    return 0;
}

// ---------------------------------------------------------------------------

struct GenArgs {
    std::string kind, problem = "edge-count", out_prefix;
    int d = 4, m = 0, n = 4, tau = 2;
    uint64_t seed = 1;
};

int gen_gadget(const GenArgs& a) {
    std::ofstream tt(a.out_prefix + ".timetable.jsonl");
    if (!tt)
        throw CLI::RuntimeError("cannot write: " + a.out_prefix + ".timetable.jsonl", 2);
    tt << std::boolalpha;

    if (a.kind == "topk") {
        InnerProductInstance ip = InnerProductInstance::random(
            a.d, a.m > 0 ? a.m : a.d, RandomSource(a.seed));
        TopKReductionInstance inst = build_topk_reduction(ip);
        write_stream_file(a.out_prefix + ".stream", inst.stream);
        for (size_t j = 0; j < inst.query_steps.size(); ++j)
            tt << json{{"step", inst.query_steps[j]},
                       {"j", j + 1},
                       {"query_kind", "topk_all_prefixes"}}
               << '\n';
    } else if (a.kind == "msf") {
        MsfProblem p = parse_msf(a.problem);
        RandomSource rng(a.seed);
        std::vector<std::vector<uint8_t>> Y(a.d, std::vector<uint8_t>(a.n));
        for (auto& row : Y)
            for (auto& bit : row) bit = static_cast<uint8_t>(rng.next_u64() & 1);
        MsfInstance inst = build_msf_stream(p, a.n, a.d, Y, a.tau);
        write_stream_file(a.out_prefix + ".stream", inst.stream);
        for (size_t j = 0; j < inst.reading_steps.size(); ++j)
            tt << json{{"step", inst.reading_steps[j]},
                       {"j", j + 1},
                       {"query_kind", a.problem},
                       {"param", inst.problem == MsfProblem::DegAtLeast
                                     ? inst.tau
                                     : inst.designated_vertex},
                       {"weight", inst.w},
                       {"true", inst.w * inst.column_sum(static_cast<int>(j))}}
               << '\n';
    } else {
        InnerProductInstance ip = InnerProductInstance::random(
            a.d, a.m > 0 ? a.m : a.d, RandomSource(a.seed));
        GadgetInstance g = build_gadget(parse_gadget(a.kind), ip);
        write_stream_file(a.out_prefix + ".stream", g.stream);
        for (const QueryPoint& qp : g.timetable) {
            std::string qk = qp.kind == QueryKind::MatchingSize ? "matching_size"
                             : qp.kind == QueryKind::CoreOfVertex
                                 ? "core_of_vertex"
                                 : "degree_count";
            tt << json{{"step", qp.step},
                       {"j", qp.j},
                       {"post", qp.post},
                       {"query_kind", qk},
                       {"param", qp.param}}
               << '\n';
        }
    }
    return 0;
}

// ---------------------------------------------------------------------------

struct CalibrateArgs {
    std::string file = "data/error_bounds.csv";
    int n = 1;
    int64_t T = 256;
    double eps = 1.0, beta = 0.01, delta = 0.0;
};

int calibrate(const CalibrateArgs& a) {
    load_error_bounds(a.file);  // seed the cache when the file exists
    double e = a.delta > 0.0
                   ? compute_error_bound_delta(a.n, a.T, a.eps, a.delta, a.beta)
                   : compute_error_bound(a.n, a.T, a.eps, a.beta);
    if (a.delta == 0.0) save_error_bounds(a.file);
    std::cout.precision(17);
    std::cout << "# schema calibrate v1: n,T,eps,delta,beta,E\n"
              << a.n << ',' << a.T << ',' << a.eps << ',' << a.delta << ','
              << a.beta << ',' << e << '\n';
    return 0;
}

// ---------------------------------------------------------------------------

struct SneArgs {
    std::string stream_path, norms = "l1,l2,top10", noise = "standard", out_path;
    double zeta = 0.25, eps = 1.0, delta = 0.0, beta = 0.05, boost_beta = 0.0;
    uint64_t seed = 1;
};

int sne_query(const SneArgs& a) {
    UpdateStream s = load_stream(a.stream_path);
    if (s.kind != StreamKind::Elements)
        throw CLI::RuntimeError("sne-query needs an element stream", 1);

    std::vector<NormSpec> norms;
    std::stringstream names(a.norms);
    for (std::string tok; std::getline(names, tok, ',');)
        norms.push_back(parse_norm(tok));

    SneConfig cfg;
    cfg.n = static_cast<int>(s.universe);
    cfg.horizon = s.horizon;
    cfg.zeta = a.zeta;
    cfg.budget.epsilon = a.eps;
    cfg.budget.delta = a.delta;
    cfg.budget.beta = a.beta;
    cfg.budget.noise_mode = parse_noise(a.noise);
    cfg.seed = a.seed;

    OutputFile out;
    out.open(a.out_path);
    std::ostream& os = out.stream();
    os.precision(17);

    std::unique_ptr<SneState> single;
    std::unique_ptr<BoostedSne> boosted;
    if (a.boost_beta > 0.0) {
        boosted = std::make_unique<BoostedSne>(cfg, a.boost_beta);
        os << "# copies=" << boosted->copies() << " slack=" << boosted->slack()
           << '\n';
    } else {
        single = std::make_unique<SneState>(cfg);
        os << "# tau_f=" << single->tau_f() << " tau_b=" << single->tau_b()
           << " levels=" << single->levels() << " slack=" << single->slack()
           << '\n';
    }
    os << "# schema sne-query v1: t,norm,true,estimate\n";

    std::vector<int64_t> freq(s.universe, 0);
    for (int64_t t = 0; t < s.horizon; ++t) {
        const Update& u = s.updates[t];
        if (u.kind == Update::Kind::InsertElement) ++freq[u.a];
        if (single)
            single->step(u);
        else
            boosted->step(u);
        std::vector<double> f(freq.begin(), freq.end());
        for (const NormSpec& norm : norms) {
            double est = single ? single->query(norm) : boosted->query(norm);
            os << (t + 1) << ',' << norm.name() << ',' << eval_norm(norm, f)
               << ',' << est << '\n';
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"continual-release mechanisms and hard-instance harness"};
    app.require_subcommand(1);

    MechanismArgs ma;
    CLI::App* rm = app.add_subcommand("run-mechanism",
                                      "replay a stream through a mechanism");
    rm->add_option("--mechanism", ma.mechanism,
                   "counter|histogram|ladder-matching|ladder-kcore|"
                   "ladder-components|degree-histogram")
        ->required();
    rm->add_option("--stream", ma.stream_path, "stream file")->required();
    rm->add_option("--eps", ma.eps);
    rm->add_option("--delta", ma.delta);
    rm->add_option("--beta", ma.beta);
    rm->add_option("--noise", ma.noise, "standard|off");
    rm->add_option("--seed", ma.seed);
    rm->add_option("--trials", ma.trials)->check(CLI::PositiveNumber);
    rm->add_option("--out", ma.out_path, "output CSV (default stdout)");

    ReductionArgs ra;
    CLI::App* rr = app.add_subcommand("run-reduction",
                                      "decode inner products from a gadget");
    rr->add_option("--gadget", ra.gadget, "matching|kcore|deghist|topk")
        ->required();
    rr->add_option("--oracle", ra.oracle, "exact|ladder");
    rr->add_option("--d", ra.d)->check(CLI::PositiveNumber);
    rr->add_option("--m", ra.m, "rounds (default d)");
    rr->add_option("--eps", ra.eps);
    rr->add_option("--delta", ra.delta);
    rr->add_option("--alpha", ra.alpha, "topk decoder slack");
    rr->add_option("--noise", ra.noise, "standard|off");
    rr->add_option("--seed", ra.seed);
    rr->add_option("--out", ra.out_path);

    GenArgs ga;
    CLI::App* gg = app.add_subcommand("gen-gadget",
                                      "write a gadget stream and timetable");
    gg->add_option("--kind", ga.kind, "matching|kcore|deghist|topk|msf")
        ->required();
    gg->add_option("--problem", ga.problem,
                   "msf family: st-mincut|mincut|deg-atleast|kcore|edge-count|"
                   "zb-matching|zb-triangle");
    gg->add_option("--d", ga.d)->check(CLI::PositiveNumber);
    gg->add_option("--m", ga.m, "rounds (default d)");
    gg->add_option("--n", ga.n, "msf edge count")->check(CLI::PositiveNumber);
    gg->add_option("--tau", ga.tau, "degree threshold for deg-atleast");
    gg->add_option("--seed", ga.seed);
    gg->add_option("--out", ga.out_prefix, "output path prefix")->required();

    CalibrateArgs ca;
    CLI::App* cal = app.add_subcommand("calibrate",
                                       "compute calibrated error bounds");
    cal->add_option("--n", ca.n)->check(CLI::PositiveNumber);
    cal->add_option("--T", ca.T)->check(CLI::PositiveNumber);
    cal->add_option("--eps", ca.eps);
    cal->add_option("--beta", ca.beta);
    cal->add_option("--delta", ca.delta);
    cal->add_option("--file", ca.file, "golden bound file");

    SneArgs sa;
    CLI::App* sq = app.add_subcommand("sne-query",
                                      "simultaneous norm estimation over a stream");
    sq->add_option("--stream", sa.stream_path, "element stream file")->required();
    sq->add_option("--norms", sa.norms, "comma list: l1,l2,lp:<p>,top<k>");
    sq->add_option("--zeta", sa.zeta);
    sq->add_option("--eps", sa.eps);
    sq->add_option("--delta", sa.delta);
    sq->add_option("--beta", sa.beta);
    sq->add_option("--boost", sa.boost_beta, "boosting beta (0 = single copy)");
    sq->add_option("--noise", sa.noise, "standard|off");
    sq->add_option("--seed", sa.seed);
    sq->add_option("--out", sa.out_path);

    CLI11_PARSE(app, argc, argv);

    try {
        if (rm->parsed()) return run_mechanism(ma);
        if (rr->parsed()) return run_reduction(ra);
        if (gg->parsed()) return gen_gadget(ga);
        if (cal->parsed()) return calibrate(ca);
        if (sq->parsed()) return sne_query(sa);
    } catch (const CLI::RuntimeError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.get_exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
