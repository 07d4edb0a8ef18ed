#include "dynclass/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <vector>

namespace dynclass {

namespace {

std::string fixed2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string sci2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.1e", v);
    return buf;
}

std::string sig2(double v) {
    if (v == 0.0) return "0.0";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2g", v);
    return buf;
}

std::string coords1(const Vec& x) {
    std::string out = "[";
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        if (i) out += ", ";
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.1f", x[i]);
        out += buf;
    }
    return out + "]";
}

// display width of a UTF-8 string, counting code points
size_t display_width(const std::string& s) {
    size_t w = 0;
    for (const char c : s)
        if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) ++w;
    return w;
}

} // namespace

std::string describe(FixedPointType type) {
    switch (type) {
        case FixedPointType::STABLE_NODE: return "Stable node";
        case FixedPointType::UNSTABLE_NODE: return "Unstable node";
        case FixedPointType::SADDLE: return "Saddle";
        case FixedPointType::STABLE_FOCUS: return "Stable focus";
        case FixedPointType::UNSTABLE_FOCUS: return "Unstable focus";
        case FixedPointType::CENTER: return "Center";
        case FixedPointType::NON_HYPERBOLIC: return "Non-hyperbolic point";
    }
    return "Unknown";
}

std::string render_report(const ClassificationReport& report) {
    // assemble the rows first, then size the box to the longest one
    struct Row {
        std::string text;
        bool separator = false;
        bool centered = false;
    };
    std::vector<Row> rows;
    auto sep = [&] { rows.push_back({"", true, false}); };

    rows.push_back({"System Classification Report", false, true});
    sep();
    rows.push_back({"System Class: " + std::string(to_string(report.system_class))});
    rows.push_back({"Confidence: " + fixed2(report.confidence)});
    sep();
    rows.push_back({"Fixed Points: " + std::to_string(report.fixed_points.size())});
    for (const auto& fp : report.fixed_points)
        rows.push_back({"  • " + describe(fp.type) + " at " + coords1(fp.location)});
    rows.push_back(
        {"Periodic Orbits: " + std::to_string(report.periodic_orbits.size())});
    for (const auto& orbit : report.periodic_orbits)
        rows.push_back({std::string("  • ") +
                        (orbit.is_stable ? "Stable" : "Unstable") +
                        " orbit, period " + fixed2(orbit.period)});
    sep();
    rows.push_back({"Jacobian Symmetry Error: " + sci2(report.jacobian_symmetry)});
    rows.push_back({"Curl/Gradient Ratio: " + sig2(report.curl_gradient_ratio)});

    std::string transverse;
    bool any_saddle = false;
    for (const auto& fp : report.fixed_points)
        if (fp.type == FixedPointType::SADDLE) any_saddle = true;
    if (!any_saddle) {
        transverse = "N/A (no saddles)";
    } else {
        switch (report.has_transverse_manifolds) {
            case Tristate::yes: transverse = "Yes"; break;
            case Tristate::no: transverse = "No"; break;
            case Tristate::unknown: transverse = "N/A (not checked)"; break;
        }
    }
    rows.push_back({"Manifolds Transverse: " + transverse});
    sep();
    rows.push_back({"Landscape: " + landscape_interpretation(report).description});

    size_t inner = 62;
    for (const auto& row : rows)
        if (!row.separator) inner = std::max(inner, display_width(row.text) + 2);

    std::string out;
    auto rule = [&](const char* l, const char* r) {
        out += l;
        for (size_t i = 0; i < inner; ++i) out += "═";
        out += r;
        out += "\n";
    };
    rule("╔", "╗");
    for (const auto& row : rows) {
        if (row.separator) {
            rule("╠", "╣");
            continue;
        }
        const size_t w = display_width(row.text);
        if (row.centered) {
            const size_t left = (inner - w) / 2;
            out += "║" + std::string(left, ' ') + row.text +
                   std::string(inner - w - left, ' ') + "║\n";
        } else {
            out += "║ " + row.text + std::string(inner - 1 - w, ' ') + "║\n";
        }
    }
    rule("╚", "╝");
    return out;
}

namespace {

nlohmann::json complex_to_json(const std::complex<double>& z) {
    return {{"re", z.real()}, {"im", z.imag()}};
}

std::complex<double> complex_from_json(const nlohmann::json& j) {
    return {j.at("re").get<double>(), j.at("im").get<double>()};
}

} // namespace

nlohmann::json to_json(const FixedPointRecord& record) {
    nlohmann::json j;
    j["location"] = std::vector<double>(record.location.data(),
                                        record.location.data() + record.location.size());
    nlohmann::json eigs = nlohmann::json::array();
    for (Eigen::Index i = 0; i < record.eigenvalues.size(); ++i)
        eigs.push_back(complex_to_json(record.eigenvalues[i]));
    j["eigenvalues"] = std::move(eigs);
    j["type"] = to_string(record.type);
    j["residual"] = record.residual;
    return j;
}

nlohmann::json to_json(const OrbitRecord& orbit) {
    nlohmann::json j;
    j["period"] = orbit.period;
    j["is_stable"] = orbit.is_stable;
    nlohmann::json mults = nlohmann::json::array();
    for (Eigen::Index i = 0; i < orbit.multipliers.size(); ++i)
        mults.push_back(complex_to_json(orbit.multipliers[i]));
    j["multipliers"] = std::move(mults);
    return j;
}

nlohmann::json to_json(const ClassificationReport& report) {
    nlohmann::json j;
    j["system_class"] = to_string(report.system_class);
    j["confidence"] = report.confidence;
    nlohmann::json fps = nlohmann::json::array();
    for (const auto& fp : report.fixed_points) fps.push_back(to_json(fp));
    j["fixed_points"] = std::move(fps);
    nlohmann::json orbits = nlohmann::json::array();
    for (const auto& orbit : report.periodic_orbits) orbits.push_back(to_json(orbit));
    j["periodic_orbits"] = std::move(orbits);
    j["jacobian_symmetry"] = report.jacobian_symmetry;
    j["curl_gradient_ratio"] = report.curl_gradient_ratio;
    switch (report.has_transverse_manifolds) {
        case Tristate::yes: j["has_transverse_manifolds"] = true; break;
        case Tristate::no: j["has_transverse_manifolds"] = false; break;
        case Tristate::unknown: j["has_transverse_manifolds"] = nullptr; break;
    }
    j["details"] = report.details;
    return j;
}

ClassificationReport report_from_json(const nlohmann::json& j) {
    ClassificationReport report;
    const std::string cls = j.at("system_class").get<std::string>();
    for (const SystemClass c :
         {SystemClass::GRADIENT, SystemClass::GRADIENT_LIKE, SystemClass::MORSE_SMALE,
          SystemClass::STRUCTURALLY_STABLE, SystemClass::GENERAL})
        if (cls == to_string(c)) report.system_class = c;
    report.confidence = j.at("confidence").get<double>();
    for (const auto& fj : j.at("fixed_points")) {
        FixedPointRecord fp;
        const auto loc = fj.at("location").get<std::vector<double>>();
        fp.location = Eigen::Map<const Vec>(loc.data(), static_cast<Eigen::Index>(loc.size()));
        fp.eigenvalues.resize(static_cast<Eigen::Index>(fj.at("eigenvalues").size()));
        Eigen::Index k = 0;
        for (const auto& e : fj.at("eigenvalues"))
            fp.eigenvalues[k++] = complex_from_json(e);
        const std::string type = fj.at("type").get<std::string>();
        for (const FixedPointType t :
             {FixedPointType::STABLE_NODE, FixedPointType::UNSTABLE_NODE,
              FixedPointType::SADDLE, FixedPointType::STABLE_FOCUS,
              FixedPointType::UNSTABLE_FOCUS, FixedPointType::CENTER,
              FixedPointType::NON_HYPERBOLIC})
            if (type == to_string(t)) fp.type = t;
        fp.residual = fj.at("residual").get<double>();
        report.fixed_points.push_back(std::move(fp));
    }
    for (const auto& oj : j.at("periodic_orbits")) {
        OrbitRecord orbit;
        orbit.period = oj.at("period").get<double>();
        orbit.is_stable = oj.at("is_stable").get<bool>();
        orbit.multipliers.resize(static_cast<Eigen::Index>(oj.at("multipliers").size()));
        Eigen::Index k = 0;
        for (const auto& m : oj.at("multipliers"))
            orbit.multipliers[k++] = complex_from_json(m);
        report.periodic_orbits.push_back(std::move(orbit));
    }
    report.jacobian_symmetry = j.at("jacobian_symmetry").get<double>();
    report.curl_gradient_ratio = j.at("curl_gradient_ratio").get<double>();
    const auto& tm = j.at("has_transverse_manifolds");
    report.has_transverse_manifolds =
        tm.is_null() ? Tristate::unknown : (tm.get<bool>() ? Tristate::yes : Tristate::no);
    report.details = j.at("details").get<std::map<std::string, std::string>>();
    return report;
}

} // namespace dynclass
