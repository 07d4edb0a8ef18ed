#pragma once

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dynclass/models.hpp"
#include "dynclass/vectorfield.hpp"

namespace dynclass {

/// Expression tree of the model text format.
struct Expr {
    enum class Kind { number, ident, neg, add, sub, mul, div, pow, pow_int, call };

    Kind kind = Kind::number;
    double number = 0.0;
    std::string name; // ident / call
    long ipow = 0;    // pow_int
    std::vector<Expr> args;
    int line = 0;
    int col = 0;

    bool operator==(const Expr& other) const;
};

/// Parsed model: states with one equation each, parameters with defaults,
/// intermediate `let` bindings (usable only after their definition), and
/// optional per-state bounds.
struct ModelDocument {
    std::vector<std::string> states;
    std::vector<std::pair<std::string, double>> params;
    std::vector<std::pair<std::string, Expr>> lets;
    std::map<std::string, Expr> equations;
    std::map<std::string, std::array<double, 2>> bounds;

    bool operator==(const ModelDocument& other) const;
};

/// Parse the plain-text model format:
///
///   # comment
///   state x y
///   param a = 1.5
///   let u = x^2
///   eq x' = -a*x + u
///   eq y' = min(x, y) - y
///   bound x = [0, 2]
///
/// '^' is right-associative and binds tighter than unary minus; functions
/// are exp, log, sin, cos, tan, tanh, sqrt, abs, min, max. All diagnostics
/// carry a line and column.
ModelDocument parse_model(const std::string& text);

/// Canonical text form; parse(print_model(doc)) == doc structurally.
std::string print_model(const ModelDocument& doc);

struct CompiledModel {
    VectorField field;
    std::optional<Box> bounds; // present when every state is bounded
};

/// Compile to an evaluatable field (over reals and duals, so Jacobians are
/// exact). Override keys must name declared parameters.
CompiledModel compile(const ModelDocument& doc, const ParamMap& overrides = {});

} // namespace dynclass
