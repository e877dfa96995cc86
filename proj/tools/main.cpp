#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <dhprony/classical.hpp>
#include <dhprony/conditioning.hpp>
#include <dhprony/esprit.hpp>
#include <dhprony/io.hpp>
#include <dhprony/pipeline.hpp>

using namespace dhprony;

namespace
{

constexpr int kExitSolver = 2;
constexpr int kExitInput = 3;

std::vector<int> parse_mult(const std::string& text)
{
    std::vector<int> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
    {
        try
        {
            std::size_t used = 0;
            parts.push_back(std::stoi(item, &used));
            if (used != item.size())
            {
                throw std::invalid_argument(item);
            }
        }
        catch (const std::exception&)
        {
            throw_invalid("bad multiplicity list: " + text);
        }
    }
    return parts;
}

/// "re,im;re,im" -> nodes
std::vector<Complex> parse_init(const std::string& text)
{
    std::vector<Complex> out;
    std::stringstream ss(text);
    std::string pair;
    while (std::getline(ss, pair, ';'))
    {
        double re = 0.0;
        double im = 0.0;
        char comma = 0;
        std::stringstream ps(pair);
        if (!(ps >> re >> comma >> im) || comma != ',')
        {
            throw_invalid("bad --init entry: " + pair);
        }
        out.push_back({re, im});
    }
    return out;
}

void emit(const Json& j, const std::string& out)
{
    if (out.empty())
    {
        std::cout << j.dump(2) << '\n';
    }
    else
    {
        write_text_file(out, j.dump(2) + "\n");
    }
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Decimated homotopy solver for confluent Prony systems"};
    app.require_subcommand(1);

    std::string input;
    std::string mult_text;
    std::string out;
    std::string strategy = "prefilter";
    std::optional<int> stride;
    std::optional<double> eta;
    std::string init;

    auto* solve = app.add_subcommand("solve", "Decimated homotopy reconstruction");
    solve->add_option("--input", input, "Measurement JSON")->required();
    solve->add_option("--mult", mult_text, "Multiplicities d1,d2,...")->required();
    solve->add_option("--strategy", strategy, "exhaustive|prefilter|init");
    solve->add_option("--p", stride, "Decimation stride");
    solve->add_option("--eta", eta, "Init-filter radius");
    solve->add_option("--init", init, "Initial nodes \"re,im;re,im\"");
    solve->add_option("--out", out, "Output JSON (stdout when omitted)");

    auto* prony = app.add_subcommand("prony", "Classical Prony's method");
    auto* esprit = app.add_subcommand("esprit", "Generalized ESPRIT");
    int window = 0;
    for (auto* sub : {prony, esprit})
    {
        sub->add_option("--input", input, "Measurement JSON")->required();
        sub->add_option("--mult", mult_text, "Multiplicities d1,d2,...")->required();
        sub->add_option("--out", out, "Output JSON (stdout when omitted)");
    }
    esprit->add_option("--window", window, "Hankel window rows (0: max(N/2, d+1))");

    std::string config_path;
    std::string out_dir;
    auto* experiment = app.add_subcommand("experiment", "Run a seeded comparison experiment");
    experiment->add_option("--config", config_path, "Experiment config JSON")->required();
    experiment->add_option("--out-dir", out_dir, "Output directory")->required();

    std::string params_path;
    std::optional<int> n_opt;
    std::optional<int> p_opt;
    auto* condition = app.add_subcommand("condition", "Condition numbers of a data point");
    condition->add_option("--params", params_path, "Parameter JSON")->required();
    condition->add_option("--N", n_opt, "Measurement count for CN_full");
    condition->add_option("--p", p_opt, "Stride for CN_decimated");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitInput;
    }

    try
    {
        if (solve->parsed())
        {
            const auto meas = measurements_from_json(read_json_file(input));
            const MultiplicityVector mult(parse_mult(mult_text));
            SolveOptions opts;
            opts.strategy = strategy_from_string(strategy);
            opts.p = stride;
            opts.eta = eta;
            if (!init.empty())
            {
                opts.z_init = parse_init(init);
            }
            const auto res = decimated_homotopy(meas, mult, opts);
            Json j = params_to_json(res.params);
            j["diagnostics"] = diagnostics_to_json(res.diagnostics);
            emit(j, out);
        }
        else if (prony->parsed() || esprit->parsed())
        {
            const auto meas = measurements_from_json(read_json_file(input));
            const MultiplicityVector mult(parse_mult(mult_text));
            EspritOptions eo;
            eo.window = window;
            const auto params = prony->parsed() ? prony_solve(meas, mult) : esprit_estimate(meas, mult, eo);
            emit(params_to_json(params), out);
        }
        else if (experiment->parsed())
        {
            auto config = config_from_json(read_json_file(config_path));
            config.output_dir = out_dir;
            const auto report = run_experiment(config);
            emit_report(report, out_dir);
            std::cout << "wrote " << report.records.size() << " records to " << out_dir << '\n';
        }
        else if (condition->parsed())
        {
            const auto params = params_from_json(read_json_file(params_path));
            ConditionReport report;
            if (n_opt)
            {
                report = cn_full(params, *n_opt);
            }
            if (p_opt)
            {
                auto dec = cn_decimated(params, *p_opt);
                report.decimated = dec.decimated;
                report.p = dec.p;
                report.delta = dec.delta;
                report.delta_star = dec.delta_star;
                if (!n_opt)
                {
                    report.N = dec.N;
                }
            }
            if (!n_opt && !p_opt)
            {
                report = cn_full(params, params.multiplicities().parameter_count());
            }
            std::cout << condition_to_json(report).dump(2) << '\n';
        }
    }
    catch (const Error& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return e.kind() == ErrorKind::SolverFailure ? kExitSolver : kExitInput;
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return kExitSolver;
    }
    return 0;
}
