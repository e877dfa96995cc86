#include <dhprony/pipeline.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <dhprony/classical.hpp>
#include <dhprony/conditioning.hpp>
#include <dhprony/hankelize.hpp>
#include <dhprony/io.hpp>
#include <dhprony/pruning.hpp>

namespace dhprony
{

namespace
{

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since)
{
    return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

const double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Coordinate permutations that map each node onto one of equal order.
std::vector<std::vector<int>> symmetric_permutations(const MultiplicityVector& mult)
{
    std::vector<int> perm(static_cast<std::size_t>(mult.count()));
    for (int i = 0; i < mult.count(); ++i)
    {
        perm[static_cast<std::size_t>(i)] = i;
    }
    std::vector<std::vector<int>> out;
    do
    {
        bool keeps = true;
        for (int i = 0; i < mult.count(); ++i)
        {
            keeps = keeps && mult[i] == mult[perm[static_cast<std::size_t>(i)]];
        }
        if (keeps)
        {
            out.push_back(perm);
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

double max_of(const std::vector<double>& v)
{
    double m = 0.0;
    for (double x : v)
    {
        m = std::max(m, x);
    }
    return m;
}

template <typename T, typename Names>
T parse_enum(const std::string& name, const Names& names, const char* what)
{
    for (const auto& [value, text] : names)
    {
        if (name == text)
        {
            return value;
        }
    }
    throw_invalid(std::string("unknown ") + what + ": " + name);
}

template <typename T, typename Names>
std::string print_enum(T value, const Names& names)
{
    for (const auto& [v, text] : names)
    {
        if (v == value)
        {
            return text;
        }
    }
    return "?";
}

const std::vector<std::pair<Method, std::string>> kMethodNames{
    {Method::DH, "DH"}, {Method::ESPRIT, "ESPRIT"}, {Method::Prony, "Prony"}};
const std::vector<std::pair<PruningStrategy, std::string>> kStrategyNames{
    {PruningStrategy::Exhaustive, "exhaustive"},
    {PruningStrategy::Prefilter, "prefilter"},
    {PruningStrategy::PrefilterInit, "init"}};
const std::vector<std::pair<NoiseKind, std::string>> kNoiseNames{
    {NoiseKind::None, "none"}, {NoiseKind::BoundedUniform, "bounded"}, {NoiseKind::Gaussian, "gaussian"}};

} // namespace

std::string to_string(Method m)
{
    return print_enum(m, kMethodNames);
}

Method method_from_string(const std::string& name)
{
    return parse_enum<Method>(name, kMethodNames, "method");
}

std::string to_string(PruningStrategy s)
{
    return print_enum(s, kStrategyNames);
}

PruningStrategy strategy_from_string(const std::string& name)
{
    if (name == "prefilter+init")
    {
        return PruningStrategy::PrefilterInit;
    }
    return parse_enum<PruningStrategy>(name, kStrategyNames, "strategy");
}

std::string to_string(NoiseKind k)
{
    return print_enum(k, kNoiseNames);
}

NoiseKind noise_kind_from_string(const std::string& name)
{
    return parse_enum<NoiseKind>(name, kNoiseNames, "noise kind");
}

void SolveOptions::validate() const
{
    if (strategy == PruningStrategy::PrefilterInit && !z_init)
    {
        throw_invalid("prefilter+init strategy requires z_init");
    }
    if (eta && !(*eta >= 0.0))
    {
        throw_invalid("eta must be nonnegative");
    }
    if (p && *p < 1)
    {
        throw_invalid("decimation stride must be positive");
    }
    track.validate();
}

SolveResult decimated_homotopy(const MeasurementSequence& meas, const MultiplicityVector& mult,
                               const SolveOptions& opts)
{
    opts.validate();
    const int N = meas.size();
    const int R = mult.parameter_count();
    const int s = mult.count();
    if (N < R)
    {
        throw_invalid("need at least R = d+s measurements");
    }
    if (opts.z_init && static_cast<int>(opts.z_init->size()) != s)
    {
        throw_invalid("z_init must have one entry per node");
    }

    SolveDiagnostics diag;
    diag.p = opts.p ? *opts.p : choose_decimation(N, R);

    auto t0 = Clock::now();
    const MeasurementSequence dec = decimate(meas, diag.p, R);
    const HankelSystem system = build_hankel_system(dec, mult);
    diag.t_construct_ms = elapsed_ms(t0);

    t0 = Clock::now();
    const SolutionSet solutions = solve_system(system.equations, opts.track);
    diag.t_solve_ms = elapsed_ms(t0);
    diag.path_count = solutions.path_count;
    diag.converged = solutions.converged;
    diag.diverged = solutions.diverged;
    diag.failed = solutions.failed;
    diag.solution_count = static_cast<int>(solutions.size());

    t0 = Clock::now();
    CandidateSet candidates;
    switch (opts.strategy)
    {
    case PruningStrategy::Exhaustive:
        candidates = exhaustive_candidates(solutions, diag.p);
        break;
    case PruningStrategy::Prefilter:
        candidates = select_prefilter(solutions, diag.p).candidates;
        break;
    case PruningStrategy::PrefilterInit:
    {
        const auto pre = select_prefilter(solutions, diag.p);
        CandidateSet all;
        for (const auto& perm : symmetric_permutations(mult))
        {
            CVector u(s);
            for (int i = 0; i < s; ++i)
            {
                u(i) = pre.u_star(perm[static_cast<std::size_t>(i)]);
            }
            auto part = alias_candidates(u, diag.p, pre.source);
            all.candidates.insert(all.candidates.end(), part.candidates.begin(), part.candidates.end());
            all.origins.insert(all.origins.end(), part.origins.begin(), part.origins.end());
        }
        const double eta = opts.eta ? *opts.eta : 1.0 / N;
        candidates = filter_by_init(all, to_cvector(*opts.z_init), eta);
        break;
    }
    }
    diag.candidate_count = static_cast<int>(candidates.size());
    const CVector z = select_min_residual(candidates, meas, mult, opts.k_max);
    diag.selected_residual = residual(z, meas, mult, opts.k_max);
    diag.t_select_ms = elapsed_ms(t0);

    const std::vector<Complex> nodes = to_std(z);
    try
    {
        CVector powered(s);
        for (int j = 0; j < s; ++j)
        {
            powered(j) = unit_power(nodes[static_cast<std::size_t>(j)], diag.p);
        }
        const double level = std::max(opts.noise_level, std::numeric_limits<double>::epsilon());
        diag.kappa = max_of(kappa_sensitivity(system, powered, level * static_cast<double>(system.max_weight)));
    }
    catch (const Error&)
    {
        diag.kappa = kNaN;
    }

    auto coefficients = confluent_vandermonde_solve(nodes, mult, meas);
    try
    {
        return {PronyParameters(nodes, std::move(coefficients)), diag};
    }
    catch (const Error& e)
    {
        throw_solver(std::string("selected nodes are not a valid data point: ") + e.what());
    }
}

void ExperimentConfig::validate() const
{
    const MultiplicityVector mult(multiplicities);
    if (trials < 1)
    {
        throw_invalid("trial count must be at least 1");
    }
    if (!(delta_min > 0.0) || delta_max < delta_min)
    {
        throw_invalid("invalid separation range");
    }
    if (!(coef_min > 0.0) || coef_max < coef_min)
    {
        throw_invalid("invalid coefficient magnitude range");
    }
    if (N < mult.parameter_count())
    {
        throw_invalid("N must be at least R = d+s");
    }
    if (methods.empty())
    {
        throw_invalid("no methods selected");
    }
    if (noise_level < 0.0)
    {
        throw_invalid("noise level must be nonnegative");
    }
    const int pmax = choose_decimation(N, mult.parameter_count());
    for (int p : p_values)
    {
        if (p < 1 || p > pmax)
        {
            throw_invalid("p values must lie in [1, floor(N/R)]");
        }
    }
}

std::vector<int> ExperimentConfig::effective_p_values() const
{
    if (!p_values.empty())
    {
        return p_values;
    }
    const MultiplicityVector mult(multiplicities);
    return {choose_decimation(N, mult.parameter_count())};
}

std::uint64_t trial_seed(std::uint64_t master, int index)
{
    // splitmix64 finalizer
    std::uint64_t z = master + static_cast<std::uint64_t>(index) + 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

PronyParameters generate_instance(const MultiplicityVector& mult, double delta, double coef_min,
                                  double coef_max, std::uint64_t seed)
{
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    std::uniform_real_distribution<double> magnitude(coef_min, coef_max);
    const double center = angle(gen);
    const int s = mult.count();
    std::vector<Complex> nodes;
    std::vector<std::vector<Complex>> coefs;
    for (int j = 0; j < s; ++j)
    {
        nodes.push_back(std::polar(1.0, center + (j - (s - 1) / 2.0) * delta));
        std::vector<Complex> a;
        for (int l = 0; l < mult[j]; ++l)
        {
            const double r = magnitude(gen);
            a.push_back(std::polar(r, angle(gen)));
        }
        coefs.push_back(std::move(a));
    }
    return PronyParameters(std::move(nodes), std::move(coefs));
}

ExperimentReport run_experiment(const ExperimentConfig& config)
{
    config.validate();
    const MultiplicityVector mult(config.multiplicities);
    const auto p_values = config.effective_p_values();

    ExperimentReport report;
    report.config = config;
    for (int t = 0; t < config.trials; ++t)
    {
        const std::uint64_t seed = trial_seed(config.seed, t);
        std::mt19937_64 gen(seed);
        std::uniform_real_distribution<double> spread(config.delta_min, config.delta_max);
        const double delta = config.delta_min == config.delta_max ? config.delta_min : spread(gen);
        const PronyParameters truth = generate_instance(mult, delta, config.coef_min, config.coef_max, gen());

        MeasurementSequence meas = forward_map(truth, config.N);
        if (config.noise_kind != NoiseKind::None && config.noise_level > 0.0)
        {
            meas = add_noise(meas, {config.noise_kind, config.noise_level, gen()});
        }

        double cn_full_value = kNaN;
        try
        {
            cn_full_value = max_of(node_entries(truth, cn_full(truth, config.N).full));
        }
        catch (const Error&)
        {
        }
        std::vector<double> cn_dec_values;
        for (int p : p_values)
        {
            try
            {
                cn_dec_values.push_back(max_of(node_entries(truth, cn_decimated(truth, p).decimated)));
            }
            catch (const Error&)
            {
                cn_dec_values.push_back(kNaN);
            }
        }

        auto base_record = [&](Method m, std::size_t pi) {
            TrialRecord r;
            r.trial = t;
            r.seed = seed;
            r.method = m;
            r.N = config.N;
            r.delta = delta;
            r.p = p_values[pi];
            r.cn_full = cn_full_value;
            r.cn_dec = cn_dec_values[pi];
            r.kappa = kNaN;
            r.node_err = kNaN;
            r.truth = truth.nodes();
            return r;
        };

        for (Method m : config.methods)
        {
            if (m == Method::DH)
            {
                for (std::size_t pi = 0; pi < p_values.size(); ++pi)
                {
                    TrialRecord r = base_record(m, pi);
                    SolveOptions opts;
                    opts.strategy = config.strategy;
                    opts.p = p_values[pi];
                    opts.noise_level = config.noise_level;
                    if (config.eta > 0.0)
                    {
                        opts.eta = config.eta;
                    }
                    std::vector<Complex> init;
                    for (const Complex& z : truth.nodes())
                    {
                        init.push_back(z * std::polar(1.0, config.init_offset));
                    }
                    opts.z_init = init;
                    try
                    {
                        const auto res = decimated_homotopy(meas, mult, opts);
                        r.ok = true;
                        r.estimate = res.params.nodes();
                        r.node_err = node_error(truth.nodes(), r.estimate);
                        r.kappa = res.diagnostics.kappa;
                        r.t_construct_ms = res.diagnostics.t_construct_ms;
                        r.t_solve_ms = res.diagnostics.t_solve_ms;
                        r.t_select_ms = res.diagnostics.t_select_ms;
                        r.n_solutions = res.diagnostics.solution_count;
                    }
                    catch (const Error& e)
                    {
                        r.error = e.what();
                    }
                    report.records.push_back(std::move(r));
                }
                continue;
            }

            bool ok = false;
            std::string error;
            std::vector<Complex> estimate;
            const auto t0 = Clock::now();
            try
            {
                if (m == Method::ESPRIT)
                {
                    EspritOptions eo;
                    eo.window = config.esprit_window;
                    eo.seed = seed;
                    estimate = esprit_estimate(meas, mult, eo).nodes();
                }
                else
                {
                    estimate = prony_solve(meas, mult).nodes();
                }
                ok = true;
            }
            catch (const Error& e)
            {
                error = e.what();
            }
            const double t_solve = elapsed_ms(t0);
            for (std::size_t pi = 0; pi < p_values.size(); ++pi)
            {
                TrialRecord r = base_record(m, pi);
                r.ok = ok;
                r.error = error;
                r.t_solve_ms = t_solve;
                if (ok)
                {
                    r.estimate = estimate;
                    r.node_err = node_error(truth.nodes(), estimate);
                }
                report.records.push_back(std::move(r));
            }
        }
    }
    return report;
}

namespace
{

std::string fmt(double x)
{
    if (std::isnan(x))
    {
        return "nan";
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

double median_of(std::vector<double> v)
{
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

} // namespace

std::string results_csv(const ExperimentReport& report)
{
    std::string out = "trial,method,seed,N,delta,p,node_err,cn_full,cn_dec,kappa,"
                      "t_construct_ms,t_solve_ms,t_select_ms,n_solutions,ok\n";
    for (const auto& r : report.records)
    {
        out += std::to_string(r.trial) + ',' + to_string(r.method) + ',' + std::to_string(r.seed) + ',' +
               std::to_string(r.N) + ',' + fmt(r.delta) + ',' + std::to_string(r.p) + ',' + fmt(r.node_err) +
               ',' + fmt(r.cn_full) + ',' + fmt(r.cn_dec) + ',' + fmt(r.kappa) + ',' + fmt(r.t_construct_ms) +
               ',' + fmt(r.t_solve_ms) + ',' + fmt(r.t_select_ms) + ',' + std::to_string(r.n_solutions) + ',' +
               (r.ok ? "1" : "0") + '\n';
    }
    return out;
}

std::string curves_csv(const ExperimentReport& report)
{
    std::string out = "metric,method,p,median,min,max,count\n";
    const std::vector<std::pair<std::string, double TrialRecord::*>> metrics{
        {"node_err", &TrialRecord::node_err},
        {"cn_full", &TrialRecord::cn_full},
        {"cn_dec", &TrialRecord::cn_dec},
        {"kappa", &TrialRecord::kappa}};
    for (const auto& [name, field] : metrics)
    {
        for (Method m : report.config.methods)
        {
            for (int p : report.config.effective_p_values())
            {
                std::vector<double> values;
                for (const auto& r : report.records)
                {
                    if (r.method == m && r.p == p && std::isfinite(r.*field))
                    {
                        values.push_back(r.*field);
                    }
                }
                if (values.empty())
                {
                    continue;
                }
                const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
                out += name + ',' + to_string(m) + ',' + std::to_string(p) + ',' + fmt(median_of(values)) + ',' +
                       fmt(*lo) + ',' + fmt(*hi) + ',' + std::to_string(values.size()) + '\n';
            }
        }
    }
    return out;
}

void emit_report(const ExperimentReport& report, const std::filesystem::path& dir)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
    {
        throw_invalid("cannot create output directory " + dir.string() + ": " + ec.message());
    }
    write_text_file(dir / "results.csv", results_csv(report));
    write_text_file(dir / "curves.csv", curves_csv(report));
    write_text_file(dir / "report.json", report_to_json(report).dump(2) + "\n");
}

} // namespace dhprony
