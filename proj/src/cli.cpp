#include "dynclass/cli.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "dynclass/modeldsl.hpp"
#include "dynclass/numerics.hpp"
#include "dynclass/report.hpp"
#include "dynclass/structure.hpp"

namespace dynclass::cli {

namespace {

/// Flag values shared by the model-consuming subcommands.
struct ModelArgs {
    std::string builtin_name;
    std::string model_path;
    std::vector<std::string> set_args;
    std::string bounds_arg;
    std::string point_arg;
    std::string format = "text";
    std::uint64_t seed = 0;
    int samples = 100;
    int starts = 100;
    double timeout = 10.0;
    int threads = 0; // 0 = all cores
};

ParamMap parse_set_args(const std::vector<std::string>& set_args) {
    ParamMap params;
    for (const auto& kv : set_args) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0)
            throw DimensionError("--set expects key=value, got '" + kv + "'");
        const std::string key = kv.substr(0, eq);
        char* end = nullptr;
        const std::string text = kv.substr(eq + 1);
        const double value = std::strtod(text.c_str(), &end);
        if (end != text.c_str() + text.size() || text.empty())
            throw DimensionError("--set " + key + ": '" + text + "' is not a number");
        params[key] = value;
    }
    return params;
}

std::vector<double> parse_numbers(const std::string& text, char sep,
                                  const std::string& what) {
    std::vector<double> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, sep)) {
        char* end = nullptr;
        const double v = std::strtod(item.c_str(), &end);
        if (item.empty() || end != item.c_str() + item.size())
            throw DimensionError(what + ": '" + item + "' is not a number");
        values.push_back(v);
    }
    return values;
}

Box parse_bounds(const std::string& text, Eigen::Index dim) {
    std::vector<double> lo, hi;
    std::stringstream ss(text);
    std::string axis;
    while (std::getline(ss, axis, ',')) {
        const auto colon = axis.find(':');
        if (colon == std::string::npos)
            throw DimensionError("--bounds expects lo:hi pairs, got '" + axis + "'");
        const auto pair = parse_numbers(axis.substr(0, colon) + "," +
                                            axis.substr(colon + 1),
                                        ',', "--bounds");
        lo.push_back(pair[0]);
        hi.push_back(pair[1]);
    }
    if (static_cast<Eigen::Index>(lo.size()) != dim)
        throw DimensionError("--bounds has " + std::to_string(lo.size()) +
                             " axes but the model has dimension " +
                             std::to_string(dim));
    return Box(Eigen::Map<const Vec>(lo.data(), static_cast<Eigen::Index>(lo.size())),
               Eigen::Map<const Vec>(hi.data(), static_cast<Eigen::Index>(hi.size())));
}

Vec parse_point(const std::string& text, Eigen::Index dim) {
    const auto values = parse_numbers(text, ',', "--point");
    if (static_cast<Eigen::Index>(values.size()) != dim)
        throw DimensionError("--point has " + std::to_string(values.size()) +
                             " components but the model has dimension " +
                             std::to_string(dim));
    return Eigen::Map<const Vec>(values.data(),
                                 static_cast<Eigen::Index>(values.size()));
}

struct LoadedModel {
    VectorField field;
    std::optional<Box> file_bounds;
};

LoadedModel load_model(const ModelArgs& args) {
    const bool has_builtin = !args.builtin_name.empty();
    const bool has_file = !args.model_path.empty();
    if (has_builtin == has_file)
        throw DimensionError("exactly one model source is required: "
                             "--builtin NAME or --model PATH");

    const ParamMap overrides = parse_set_args(args.set_args);
    if (has_builtin) return {builtin(args.builtin_name, overrides), std::nullopt};

    std::ifstream in(args.model_path);
    if (!in)
        throw DimensionError("cannot open model file '" + args.model_path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    CompiledModel compiled = compile(parse_model(buffer.str()), overrides);
    return {std::move(compiled.field), std::move(compiled.bounds)};
}

Box resolve_bounds(const ModelArgs& args, const LoadedModel& model) {
    if (!args.bounds_arg.empty())
        return parse_bounds(args.bounds_arg, model.field.dimension());
    if (model.file_bounds) return *model.file_bounds;
    throw DimensionError("bounds are required: pass --bounds \"lo:hi,...\" or use "
                         "a model file with bound lines for every state");
}

void add_model_flags(CLI::App* cmd, ModelArgs& args, bool with_bounds,
                     bool with_point) {
    cmd->add_option("--builtin", args.builtin_name, "built-in model name");
    cmd->add_option("--model", args.model_path, "path to a .fcm model file");
    cmd->add_option("--set", args.set_args, "parameter override key=value")
        ->take_all();
    if (with_bounds)
        cmd->add_option("--bounds", args.bounds_arg,
                        "per-axis bounds \"lo:hi,lo:hi,...\"");
    if (with_point)
        cmd->add_option("--point", args.point_arg, "evaluation point \"v1,v2,...\"");
    cmd->add_option("--seed", args.seed, "random seed (default 0)");
    cmd->add_option("--format", args.format, "output format: text or json")
        ->check(CLI::IsMember({"text", "json"}));
    cmd->add_option("--threads", args.threads,
                    "worker threads (0 = all cores)");
}

nlohmann::json fixed_points_json(const std::vector<FixedPointRecord>& fps) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& fp : fps) arr.push_back(to_json(fp));
    return {{"fixed_points", arr}};
}

std::string describe_line(const FixedPointRecord& fp) {
    char buf[64];
    std::string line = describe(fp.type) + " at [";
    for (Eigen::Index i = 0; i < fp.location.size(); ++i) {
        if (i) line += ", ";
        std::snprintf(buf, sizeof(buf), "%.6g", fp.location[i]);
        line += buf;
    }
    std::snprintf(buf, sizeof(buf), "%.2e", fp.residual);
    line += std::string("], residual ") + buf;
    return line;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Structural classification of continuous-time dynamical systems"};
    app.name("dynclass");
    app.require_subcommand(1);

    ModelArgs margs;

    auto* classify_cmd =
        app.add_subcommand("classify", "full classification of a model");
    add_model_flags(classify_cmd, margs, true, false);
    classify_cmd->add_option("--samples", margs.samples,
                             "points for Jacobian/curl statistics");
    classify_cmd->add_option("--starts", margs.starts, "fixed point search starts");
    classify_cmd->add_option("--timeout", margs.timeout,
                             "periodic orbit search timeout in seconds");

    auto* quick_cmd =
        app.add_subcommand("quick", "fast classification, no manifold analysis");
    add_model_flags(quick_cmd, margs, true, false);

    auto* fp_cmd = app.add_subcommand("fixed-points", "locate fixed points");
    add_model_flags(fp_cmd, margs, true, false);
    fp_cmd->add_option("--starts", margs.starts, "search starts");

    auto* orbit_cmd = app.add_subcommand("orbits", "search for periodic orbits");
    add_model_flags(orbit_cmd, margs, true, false);
    orbit_cmd->add_option("--timeout", margs.timeout, "search timeout in seconds");

    auto* curl_cmd = app.add_subcommand("curl", "curl magnitude at a point");
    add_model_flags(curl_cmd, margs, false, true);

    auto* jac_cmd = app.add_subcommand("jacobian", "Jacobian matrix at a point");
    add_model_flags(jac_cmd, margs, false, true);

    auto* models_cmd = app.add_subcommand("models", "list built-in models");
    std::string models_format = "text";
    models_cmd->add_option("--format", models_format, "output format")
        ->check(CLI::IsMember({"text", "json"}));

    std::vector<const char*> argv;
    argv.push_back("dynclass");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return 1;
    }

    const bool json_out = margs.format == "json";
    try {
        if (models_cmd->parsed()) {
            if (models_format == "json") {
                out << nlohmann::json{{"models", builtin_names()}}.dump() << "\n";
            } else {
                for (const auto& name : builtin_names()) out << name << "\n";
            }
            return 0;
        }

        const LoadedModel model = load_model(margs);

        if (classify_cmd->parsed() || quick_cmd->parsed()) {
            const Box bounds = resolve_bounds(margs, model);
            ClassificationReport report;
            if (quick_cmd->parsed()) {
                report = quick_classify(model.field, bounds, margs.seed,
                                        margs.threads);
            } else {
                ClassifySettings settings;
                settings.n_samples = margs.samples;
                settings.n_starts = margs.starts;
                settings.orbit_timeout = margs.timeout;
                settings.seed = margs.seed;
                settings.threads = margs.threads;
                report = classify_system(model.field, bounds, settings);
            }
            if (json_out)
                out << to_json(report).dump() << "\n";
            else
                out << render_report(report);
            return 0;
        }

        if (fp_cmd->parsed()) {
            const Box bounds = resolve_bounds(margs, model);
            FixedPointSearchSettings settings;
            settings.n_starts = margs.starts;
            settings.seed = margs.seed;
            settings.threads = margs.threads;
            const auto fps = find_fixed_points(model.field, bounds, settings);
            if (json_out) {
                out << fixed_points_json(fps).dump() << "\n";
            } else {
                out << "Fixed points: " << fps.size() << "\n";
                for (const auto& fp : fps) out << "  " << describe_line(fp) << "\n";
            }
            return 0;
        }

        if (orbit_cmd->parsed()) {
            const Box bounds = resolve_bounds(margs, model);
            OrbitSearchSettings settings;
            settings.seed = margs.seed;
            settings.timeout_seconds = margs.timeout;
            settings.threads = margs.threads;
            const auto orbits = find_periodic_orbits(model.field, bounds, settings);
            if (json_out) {
                nlohmann::json arr = nlohmann::json::array();
                for (const auto& orbit : orbits) arr.push_back(to_json(orbit));
                out << nlohmann::json{{"periodic_orbits", arr}}.dump() << "\n";
            } else {
                out << "Periodic orbits: " << orbits.size() << "\n";
                char buf[64];
                for (const auto& orbit : orbits) {
                    std::snprintf(buf, sizeof(buf), "%.6g", orbit.period);
                    out << "  " << (orbit.is_stable ? "stable" : "unstable")
                        << " orbit, period " << buf << "\n";
                }
            }
            return 0;
        }

        if (curl_cmd->parsed() || jac_cmd->parsed()) {
            if (margs.point_arg.empty())
                throw DimensionError("--point is required");
            const Vec x = parse_point(margs.point_arg, model.field.dimension());
            if (curl_cmd->parsed()) {
                const double curl = curl_magnitude(model.field, x);
                const double ratio = curl_to_gradient_ratio(model.field, x);
                if (json_out) {
                    nlohmann::json j;
                    j["point"] = std::vector<double>(x.data(), x.data() + x.size());
                    j["curl_magnitude"] = curl;
                    j["curl_to_gradient_ratio"] = ratio;
                    out << j.dump() << "\n";
                } else {
                    char buf[64];
                    std::snprintf(buf, sizeof(buf), "%.17g", curl);
                    out << "curl_magnitude = " << buf << "\n";
                    std::snprintf(buf, sizeof(buf), "%.17g", ratio);
                    out << "curl_to_gradient_ratio = " << buf << "\n";
                }
            } else {
                const Mat j = jacobian(model.field, x);
                if (json_out) {
                    nlohmann::json rows = nlohmann::json::array();
                    for (Eigen::Index r = 0; r < j.rows(); ++r) {
                        nlohmann::json row = nlohmann::json::array();
                        for (Eigen::Index c = 0; c < j.cols(); ++c)
                            row.push_back(j(r, c));
                        rows.push_back(std::move(row));
                    }
                    nlohmann::json doc;
                    doc["point"] = std::vector<double>(x.data(), x.data() + x.size());
                    doc["jacobian"] = std::move(rows);
                    out << doc.dump() << "\n";
                } else {
                    char buf[64];
                    std::string text = "[";
                    for (Eigen::Index r = 0; r < j.rows(); ++r) {
                        if (r) text += ",";
                        text += "[";
                        for (Eigen::Index c = 0; c < j.cols(); ++c) {
                            if (c) text += ",";
                            // + 0.0 folds negative zeros from the dual pass
                            std::snprintf(buf, sizeof(buf), "%.17g", j(r, c) + 0.0);
                            text += buf;
                        }
                        text += "]";
                    }
                    text += "]";
                    out << text << "\n";
                }
            }
            return 0;
        }

        err << "no command given\n";
        return 1;
    } catch (const ParseError& e) {
        err << e.what() << "\n";
        return 1;
    } catch (const DimensionError& e) {
        err << e.what() << "\n";
        return 1;
    } catch (const UnknownModelError& e) {
        err << e.what() << "\n";
        return 1;
    } catch (const UnknownParameterError& e) {
        err << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        err << "analysis failed: " << e.what() << "\n";
        return 2;
    }
}

} // namespace dynclass::cli
