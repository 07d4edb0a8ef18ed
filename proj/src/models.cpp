#include "dynclass/models.hpp"

#include <set>

namespace dynclass {

namespace {

double take(ParamMap& params, const std::string& key, double fallback) {
    auto it = params.find(key);
    if (it == params.end()) return fallback;
    const double v = it->second;
    params.erase(it);
    return v;
}

void reject_leftovers(const ParamMap& params, const std::string& model) {
    if (params.empty()) return;
    std::string keys;
    for (const auto& [k, v] : params) {
        if (!keys.empty()) keys += ", ";
        keys += k;
    }
    throw UnknownParameterError("unknown parameter(s) for model '" + model +
                                "': " + keys);
}

} // namespace

const std::vector<std::string>& builtin_names() {
    static const std::vector<std::string> names = {
        "gradient2d", "rotation", "toggle", "vanderpol", "lorenz", "stemcell"};
    return names;
}

Eigen::Index builtin_dimension(const std::string& name) {
    if (name == "gradient2d" || name == "rotation" || name == "toggle" ||
        name == "vanderpol")
        return 2;
    if (name == "lorenz") return 3;
    if (name == "stemcell") return 4;
    throw UnknownModelError("unknown model '" + name + "'");
}

VectorField builtin(const std::string& name, const ParamMap& params) {
    ParamMap rest = params;
    if (name == "gradient2d") {
        reject_leftovers(rest, name);
        return make_field(models::Gradient2D{}, 2, name);
    }
    if (name == "rotation") {
        models::DampedRotation m;
        m.omega = take(rest, "omega", m.omega);
        reject_leftovers(rest, name);
        return make_field(m, 2, name);
    }
    if (name == "toggle") {
        models::ToggleSwitch m;
        m.a = take(rest, "a", m.a);
        m.n = take(rest, "n", m.n);
        reject_leftovers(rest, name);
        return make_field(m, 2, name);
    }
    if (name == "vanderpol") {
        reject_leftovers(rest, name);
        return make_field(models::VanDerPol{}, 2, name);
    }
    if (name == "lorenz") {
        models::Lorenz m;
        m.sigma = take(rest, "sigma", m.sigma);
        m.rho = take(rest, "rho", m.rho);
        m.beta = take(rest, "beta", m.beta);
        reject_leftovers(rest, name);
        return make_field(m, 3, name);
    }
    if (name == "stemcell") {
        StemCellParams p;
        p.k0 = take(rest, "k0", p.k0);
        p.k1 = take(rest, "k1", p.k1);
        p.k2 = take(rest, "k2", p.k2);
        p.k3 = take(rest, "k3", p.k3);
        p.k4 = take(rest, "k4", p.k4);
        p.k5 = take(rest, "k5", p.k5);
        p.k6 = take(rest, "k6", p.k6);
        p.k7 = take(rest, "k7", p.k7);
        p.k8 = take(rest, "k8", p.k8);
        p.k9 = take(rest, "k9", p.k9);
        p.k10 = take(rest, "k10", p.k10);
        p.k11 = take(rest, "k11", p.k11);
        p.k12 = take(rest, "k12", p.k12);
        p.k13 = take(rest, "k13", p.k13);
        p.k14 = take(rest, "k14", p.k14);
        p.kd = take(rest, "kd", p.kd);
        p.L = take(rest, "L", p.L);
        reject_leftovers(rest, name);
        return make_field(models::StemCell{p}, 4, name);
    }
    throw UnknownModelError("unknown model '" + name + "'");
}

} // namespace dynclass
