#include <dhprony/io.hpp>

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace dhprony
{

namespace
{

/// NaN and infinities are stored as null.
Json number(double x)
{
    return std::isfinite(x) ? Json(x) : Json(nullptr);
}

double number_from(const Json& j)
{
    return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

template <typename F>
auto guarded(const char* what, F&& f) -> decltype(f())
{
    try
    {
        return f();
    }
    catch (const Json::exception& e)
    {
        throw_invalid(std::string(what) + ": " + e.what());
    }
}

} // namespace

Json complex_to_json(Complex z)
{
    return Json::array({z.real(), z.imag()});
}

Complex complex_from_json(const Json& j)
{
    if (!j.is_array() || j.size() != 2)
    {
        throw_invalid("complex numbers must be [re, im] pairs");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

Json complex_list_to_json(const std::vector<Complex>& v)
{
    Json out = Json::array();
    for (const Complex& z : v)
    {
        out.push_back(complex_to_json(z));
    }
    return out;
}

std::vector<Complex> complex_list_from_json(const Json& j)
{
    if (!j.is_array())
    {
        throw_invalid("expected an array of [re, im] pairs");
    }
    std::vector<Complex> out;
    for (const auto& e : j)
    {
        out.push_back(complex_from_json(e));
    }
    return out;
}

MeasurementSequence measurements_from_json(const Json& j)
{
    return guarded("measurements", [&] {
        if (!j.contains("measurements"))
        {
            throw_invalid("input JSON lacks a \"measurements\" array");
        }
        MeasurementSequence m;
        m.values = complex_list_from_json(j.at("measurements"));
        return m;
    });
}

Json measurements_to_json(const MeasurementSequence& meas)
{
    return Json{{"measurements", complex_list_to_json(meas.values)}};
}

PronyParameters params_from_json(const Json& j)
{
    return guarded("parameters", [&] {
        std::vector<std::vector<Complex>> coefs;
        for (const auto& c : j.at("coefficients"))
        {
            coefs.push_back(complex_list_from_json(c));
        }
        return PronyParameters(complex_list_from_json(j.at("nodes")), std::move(coefs));
    });
}

Json params_to_json(const PronyParameters& params)
{
    Json coefs = Json::array();
    for (const auto& c : params.coefficients())
    {
        coefs.push_back(complex_list_to_json(c));
    }
    return Json{{"nodes", complex_list_to_json(params.nodes())},
                {"coefficients", coefs},
                {"multiplicities", params.multiplicities().parts()}};
}

Json diagnostics_to_json(const SolveDiagnostics& d)
{
    return Json{{"p", d.p},
                {"path_count", d.path_count},
                {"converged", d.converged},
                {"diverged", d.diverged},
                {"failed", d.failed},
                {"solution_count", d.solution_count},
                {"candidate_count", d.candidate_count},
                {"selected_residual", number(d.selected_residual)},
                {"kappa", number(d.kappa)},
                {"t_construct_ms", d.t_construct_ms},
                {"t_solve_ms", d.t_solve_ms},
                {"t_select_ms", d.t_select_ms}};
}

Json condition_to_json(const ConditionReport& r)
{
    auto list = [](const std::vector<double>& v) {
        Json out = Json::array();
        for (double x : v)
        {
            out.push_back(number(x));
        }
        return out;
    };
    Json out{{"N", r.N}, {"p", r.p}, {"delta", r.delta}, {"delta_star", r.delta_star}};
    if (!r.full.empty())
    {
        out["cn_full"] = list(r.full);
    }
    if (!r.decimated.empty())
    {
        out["cn_decimated"] = list(r.decimated);
    }
    if (!r.kappa.empty())
    {
        out["kappa"] = list(r.kappa);
    }
    return out;
}

Json config_to_json(const ExperimentConfig& c)
{
    Json methods = Json::array();
    for (Method m : c.methods)
    {
        methods.push_back(to_string(m));
    }
    return Json{{"multiplicities", c.multiplicities},
                {"delta_min", c.delta_min},
                {"delta_max", c.delta_max},
                {"coef_min", c.coef_min},
                {"coef_max", c.coef_max},
                {"seed", c.seed},
                {"N", c.N},
                {"p_values", c.p_values},
                {"noise_kind", to_string(c.noise_kind)},
                {"noise_level", c.noise_level},
                {"trials", c.trials},
                {"methods", methods},
                {"strategy", to_string(c.strategy)},
                {"init_offset", c.init_offset},
                {"eta", c.eta},
                {"esprit_window", c.esprit_window},
                {"output_dir", c.output_dir}};
}

ExperimentConfig config_from_json(const Json& j)
{
    return guarded("experiment config", [&] {
        ExperimentConfig c;
        if (!j.is_object())
        {
            throw_invalid("experiment config must be a JSON object");
        }
        c.multiplicities = j.value("multiplicities", c.multiplicities);
        c.delta_min = j.value("delta_min", c.delta_min);
        c.delta_max = j.value("delta_max", c.delta_min);
        if (j.contains("delta"))
        {
            c.delta_min = c.delta_max = j.at("delta").get<double>();
        }
        c.coef_min = j.value("coef_min", c.coef_min);
        c.coef_max = j.value("coef_max", c.coef_max);
        c.seed = j.value("seed", c.seed);
        c.N = j.value("N", c.N);
        c.p_values = j.value("p_values", c.p_values);
        c.noise_kind = noise_kind_from_string(j.value("noise_kind", to_string(c.noise_kind)));
        c.noise_level = j.value("noise_level", c.noise_level);
        c.trials = j.value("trials", c.trials);
        if (j.contains("methods"))
        {
            c.methods.clear();
            for (const auto& m : j.at("methods"))
            {
                c.methods.push_back(method_from_string(m.get<std::string>()));
            }
        }
        c.strategy = strategy_from_string(j.value("strategy", to_string(c.strategy)));
        c.init_offset = j.value("init_offset", c.init_offset);
        c.eta = j.value("eta", c.eta);
        c.esprit_window = j.value("esprit_window", c.esprit_window);
        c.output_dir = j.value("output_dir", c.output_dir);
        c.validate();
        return c;
    });
}

Json report_to_json(const ExperimentReport& r)
{
    Json records = Json::array();
    for (const auto& t : r.records)
    {
        records.push_back(Json{{"trial", t.trial},
                               {"seed", t.seed},
                               {"method", to_string(t.method)},
                               {"N", t.N},
                               {"delta", t.delta},
                               {"p", t.p},
                               {"ok", t.ok},
                               {"error", t.error},
                               {"node_err", number(t.node_err)},
                               {"cn_full", number(t.cn_full)},
                               {"cn_dec", number(t.cn_dec)},
                               {"kappa", number(t.kappa)},
                               {"t_construct_ms", t.t_construct_ms},
                               {"t_solve_ms", t.t_solve_ms},
                               {"t_select_ms", t.t_select_ms},
                               {"n_solutions", t.n_solutions},
                               {"truth", complex_list_to_json(t.truth)},
                               {"estimate", complex_list_to_json(t.estimate)}});
    }
    return Json{{"config", config_to_json(r.config)}, {"records", records}};
}

ExperimentReport report_from_json(const Json& j)
{
    return guarded("report", [&] {
        ExperimentReport r;
        r.config = config_from_json(j.at("config"));
        for (const auto& e : j.at("records"))
        {
            TrialRecord t;
            t.trial = e.at("trial").get<int>();
            t.seed = e.at("seed").get<std::uint64_t>();
            t.method = method_from_string(e.at("method").get<std::string>());
            t.N = e.at("N").get<int>();
            t.delta = e.at("delta").get<double>();
            t.p = e.at("p").get<int>();
            t.ok = e.at("ok").get<bool>();
            t.error = e.at("error").get<std::string>();
            t.node_err = number_from(e.at("node_err"));
            t.cn_full = number_from(e.at("cn_full"));
            t.cn_dec = number_from(e.at("cn_dec"));
            t.kappa = number_from(e.at("kappa"));
            t.t_construct_ms = e.at("t_construct_ms").get<double>();
            t.t_solve_ms = e.at("t_solve_ms").get<double>();
            t.t_select_ms = e.at("t_select_ms").get<double>();
            t.n_solutions = e.at("n_solutions").get<int>();
            t.truth = complex_list_from_json(e.at("truth"));
            t.estimate = complex_list_from_json(e.at("estimate"));
            r.records.push_back(std::move(t));
        }
        return r;
    });
}

Json read_json_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
    {
        throw_invalid("cannot open " + path.string());
    }
    try
    {
        return Json::parse(in);
    }
    catch (const Json::exception& e)
    {
        throw_invalid(path.string() + ": " + e.what());
    }
}

void write_text_file(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream out(path);
    if (!out)
    {
        throw_invalid("cannot write " + path.string());
    }
    out << text;
    if (!out)
    {
        throw_invalid("write failed for " + path.string());
    }
}

} // namespace dhprony
