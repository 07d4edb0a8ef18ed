#include "dynclass/modeldsl.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <set>

#include "dynclass/dual.hpp"

namespace dynclass {

bool Expr::operator==(const Expr& other) const {
    if (kind != other.kind || name != other.name || ipow != other.ipow ||
        args.size() != other.args.size())
        return false;
    if (kind == Kind::number && number != other.number) return false;
    for (size_t i = 0; i < args.size(); ++i)
        if (!(args[i] == other.args[i])) return false;
    return true;
}

bool ModelDocument::operator==(const ModelDocument& other) const {
    return states == other.states && params == other.params && lets == other.lets &&
           equations == other.equations && bounds == other.bounds;
}

namespace {

const std::set<std::string>& keywords() {
    static const std::set<std::string> kw = {"state", "param", "let", "eq", "bound"};
    return kw;
}

enum class Func { exp_, log_, sin_, cos_, tan_, tanh_, sqrt_, abs_, min_, max_ };

const std::map<std::string, std::pair<Func, int>>& functions() {
    static const std::map<std::string, std::pair<Func, int>> fns = {
        {"exp", {Func::exp_, 1}},   {"log", {Func::log_, 1}},
        {"sin", {Func::sin_, 1}},   {"cos", {Func::cos_, 1}},
        {"tan", {Func::tan_, 1}},   {"tanh", {Func::tanh_, 1}},
        {"sqrt", {Func::sqrt_, 1}}, {"abs", {Func::abs_, 1}},
        {"min", {Func::min_, 2}},   {"max", {Func::max_, 2}},
    };
    return fns;
}

struct Token {
    enum class Kind { ident, number, op, end };
    Kind kind = Kind::end;
    std::string text;
    double value = 0.0;
    int col = 0;
};

class LineLexer {
public:
    LineLexer(const std::string& line, int line_no) : line_(line), line_no_(line_no) {
        advance();
    }

    const Token& peek() const { return current_; }

    Token take() {
        Token t = current_;
        advance();
        return t;
    }

    [[noreturn]] void fail(const std::string& msg, int col) const {
        throw ParseError(line_no_, col, msg);
    }
    [[noreturn]] void fail_here(const std::string& msg) const {
        fail(msg, current_.col);
    }

    int line_no() const { return line_no_; }

private:
    void advance() {
        while (pos_ < line_.size() &&
               (line_[pos_] == ' ' || line_[pos_] == '\t'))
            ++pos_;
        const int col = static_cast<int>(pos_) + 1;
        if (pos_ >= line_.size() || line_[pos_] == '#') {
            current_ = {Token::Kind::end, "", 0.0, col};
            return;
        }
        const char c = line_[pos_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t start = pos_;
            while (pos_ < line_.size() &&
                   (std::isalnum(static_cast<unsigned char>(line_[pos_])) ||
                    line_[pos_] == '_'))
                ++pos_;
            current_ = {Token::Kind::ident, line_.substr(start, pos_ - start), 0.0,
                        col};
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '.' && pos_ + 1 < line_.size() &&
             std::isdigit(static_cast<unsigned char>(line_[pos_ + 1])))) {
            size_t start = pos_;
            while (pos_ < line_.size() &&
                   (std::isdigit(static_cast<unsigned char>(line_[pos_])) ||
                    line_[pos_] == '.'))
                ++pos_;
            if (pos_ < line_.size() && (line_[pos_] == 'e' || line_[pos_] == 'E')) {
                size_t mark = pos_;
                ++pos_;
                if (pos_ < line_.size() && (line_[pos_] == '+' || line_[pos_] == '-'))
                    ++pos_;
                if (pos_ < line_.size() &&
                    std::isdigit(static_cast<unsigned char>(line_[pos_]))) {
                    while (pos_ < line_.size() &&
                           std::isdigit(static_cast<unsigned char>(line_[pos_])))
                        ++pos_;
                } else {
                    pos_ = mark; // 'e' belongs to something else
                }
            }
            const std::string text = line_.substr(start, pos_ - start);
            char* end = nullptr;
            const double value = std::strtod(text.c_str(), &end);
            if (end != text.c_str() + text.size())
                throw ParseError(line_no_, col, "malformed number '" + text + "'");
            current_ = {Token::Kind::number, text, value, col};
            return;
        }
        static const std::string ops = "+-*/^()[],='";
        if (ops.find(c) != std::string::npos) {
            ++pos_;
            current_ = {Token::Kind::op, std::string(1, c), 0.0, col};
            return;
        }
        throw ParseError(line_no_, col,
                         std::string("unexpected character '") + c + "'");
    }

    const std::string& line_;
    int line_no_;
    size_t pos_ = 0;
    Token current_;
};

/// Recursive-descent expression parser with the precedence ladder
/// ^ (right-assoc) > unary - > * / > + -.
class ExprParser {
public:
    explicit ExprParser(LineLexer& lex) : lex_(lex) {}

    Expr parse() {
        Expr e = sum();
        return e;
    }

private:
    bool is_op(const char* text) const {
        return lex_.peek().kind == Token::Kind::op && lex_.peek().text == text;
    }

    Expr sum() {
        Expr left = product();
        while (is_op("+") || is_op("-")) {
            const Token op = lex_.take();
            last_op_ = op;
            Expr node;
            node.kind = op.text == "+" ? Expr::Kind::add : Expr::Kind::sub;
            node.line = lex_.line_no();
            node.col = op.col;
            node.args.push_back(std::move(left));
            node.args.push_back(product());
            left = std::move(node);
        }
        return left;
    }

    Expr product() {
        Expr left = unary();
        while (is_op("*") || is_op("/")) {
            const Token op = lex_.take();
            last_op_ = op;
            Expr node;
            node.kind = op.text == "*" ? Expr::Kind::mul : Expr::Kind::div;
            node.line = lex_.line_no();
            node.col = op.col;
            node.args.push_back(std::move(left));
            node.args.push_back(unary());
            left = std::move(node);
        }
        return left;
    }

    Expr unary() {
        if (is_op("-")) {
            const Token op = lex_.take();
            last_op_ = op;
            Expr node;
            node.kind = Expr::Kind::neg;
            node.line = lex_.line_no();
            node.col = op.col;
            node.args.push_back(unary());
            return node;
        }
        return power();
    }

    Expr power() {
        Expr base = atom();
        if (!is_op("^")) return base;
        const Token op = lex_.take();
        last_op_ = op;

        // exponent binds right and may carry its own unary minus
        Expr exponent = is_op("-") ? unary() : power();

        // literal small integer exponents get an exact-at-zero fast path
        const Expr* literal = nullptr;
        bool negated = false;
        if (exponent.kind == Expr::Kind::number) {
            literal = &exponent;
        } else if (exponent.kind == Expr::Kind::neg &&
                   exponent.args[0].kind == Expr::Kind::number) {
            literal = &exponent.args[0];
            negated = true;
        }
        if (literal) {
            const double v = literal->number;
            if (v == std::floor(v) && std::abs(v) <= 32.0) {
                Expr node;
                node.kind = Expr::Kind::pow_int;
                node.ipow = static_cast<long>(v) * (negated ? -1 : 1);
                node.line = lex_.line_no();
                node.col = op.col;
                node.args.push_back(std::move(base));
                return node;
            }
        }

        Expr node;
        node.kind = Expr::Kind::pow;
        node.line = lex_.line_no();
        node.col = op.col;
        node.args.push_back(std::move(base));
        node.args.push_back(std::move(exponent));
        return node;
    }

    Expr atom() {
        const Token& t = lex_.peek();
        if (t.kind == Token::Kind::number) {
            const Token num = lex_.take();
            Expr node;
            node.kind = Expr::Kind::number;
            node.number = num.value;
            node.line = lex_.line_no();
            node.col = num.col;
            return node;
        }
        if (t.kind == Token::Kind::ident) {
            const Token name = lex_.take();
            if (is_op("(")) {
                const auto fn = functions().find(name.text);
                if (fn == functions().end())
                    lex_.fail("unknown function '" + name.text + "'", name.col);
                lex_.take(); // (
                Expr node;
                node.kind = Expr::Kind::call;
                node.name = name.text;
                node.line = lex_.line_no();
                node.col = name.col;
                node.args.push_back(sum());
                while (is_op(",")) {
                    lex_.take();
                    node.args.push_back(sum());
                }
                if (!is_op(")")) lex_.fail_here("expected ')' in function call");
                lex_.take();
                if (static_cast<int>(node.args.size()) != fn->second.second)
                    lex_.fail("function '" + name.text + "' expects " +
                                  std::to_string(fn->second.second) + " argument(s)",
                              name.col);
                return node;
            }
            if (functions().count(name.text) || keywords().count(name.text))
                lex_.fail("'" + name.text + "' is a reserved word", name.col);
            Expr node;
            node.kind = Expr::Kind::ident;
            node.name = name.text;
            node.line = lex_.line_no();
            node.col = name.col;
            return node;
        }
        if (is_op("(")) {
            lex_.take();
            Expr inner = sum();
            if (!is_op(")")) lex_.fail_here("expected ')'");
            lex_.take();
            return inner;
        }
        // missing operand: point at the operator that dangles
        if (last_op_.kind == Token::Kind::op)
            lex_.fail("expected an operand after '" + last_op_.text + "'",
                      last_op_.col);
        lex_.fail_here("expected an expression");
    }

    LineLexer& lex_;
    Token last_op_{};
};

std::string identifier(LineLexer& lex, const char* what) {
    const Token t = lex.take();
    if (t.kind != Token::Kind::ident)
        lex.fail(std::string("expected ") + what, t.col);
    if (keywords().count(t.text) || functions().count(t.text))
        lex.fail("'" + t.text + "' is a reserved word", t.col);
    return t.text;
}

void expect_op(LineLexer& lex, const char* op) {
    const Token t = lex.take();
    if (t.kind != Token::Kind::op || t.text != op)
        lex.fail(std::string("expected '") + op + "'", t.col);
}

double signed_number(LineLexer& lex) {
    double sign = 1.0;
    if (lex.peek().kind == Token::Kind::op && lex.peek().text == "-") {
        lex.take();
        sign = -1.0;
    }
    const Token t = lex.take();
    if (t.kind != Token::Kind::number) lex.fail("expected a number", t.col);
    return sign * t.value;
}

void expect_end(LineLexer& lex) {
    if (lex.peek().kind != Token::Kind::end)
        lex.fail_here("unexpected trailing input");
}

/// Identifier validation: every name in an expression must resolve against
/// the symbols visible at that point in the file.
void check_idents(const Expr& e, const std::set<std::string>& visible) {
    if (e.kind == Expr::Kind::ident && !visible.count(e.name))
        throw ParseError(e.line, e.col, "unknown identifier '" + e.name + "'");
    for (const Expr& a : e.args) check_idents(a, visible);
}

int precedence(const Expr& e) {
    switch (e.kind) {
        case Expr::Kind::add:
        case Expr::Kind::sub: return 1;
        case Expr::Kind::mul:
        case Expr::Kind::div: return 2;
        case Expr::Kind::neg: return 3;
        case Expr::Kind::pow:
        case Expr::Kind::pow_int: return 4;
        default: return 5;
    }
}

std::string fmt_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void print_expr(const Expr& e, int min_prec, std::string& out) {
    const int prec = precedence(e);
    const bool parens = prec < min_prec;
    if (parens) out += "(";
    switch (e.kind) {
        case Expr::Kind::number: out += fmt_number(e.number); break;
        case Expr::Kind::ident: out += e.name; break;
        case Expr::Kind::neg:
            out += "-";
            print_expr(e.args[0], 4, out);
            break;
        case Expr::Kind::add:
        case Expr::Kind::sub:
            print_expr(e.args[0], 1, out);
            out += e.kind == Expr::Kind::add ? " + " : " - ";
            print_expr(e.args[1], 2, out);
            break;
        case Expr::Kind::mul:
        case Expr::Kind::div:
            print_expr(e.args[0], 2, out);
            out += e.kind == Expr::Kind::mul ? "*" : "/";
            print_expr(e.args[1], 3, out);
            break;
        case Expr::Kind::pow:
            print_expr(e.args[0], 5, out);
            out += "^";
            print_expr(e.args[1], 4, out);
            break;
        case Expr::Kind::pow_int:
            print_expr(e.args[0], 5, out);
            out += "^";
            if (e.ipow < 0) {
                out += "(-" + std::to_string(-e.ipow) + ")";
            } else {
                out += std::to_string(e.ipow);
            }
            break;
        case Expr::Kind::call: {
            out += e.name + "(";
            for (size_t i = 0; i < e.args.size(); ++i) {
                if (i) out += ", ";
                print_expr(e.args[i], 1, out);
            }
            out += ")";
            break;
        }
    }
    if (parens) out += ")";
}

} // namespace

ModelDocument parse_model(const std::string& text) {
    ModelDocument doc;
    std::set<std::string> state_set, param_set, let_set;
    std::map<std::string, int> state_line;

    int line_no = 0;
    size_t pos = 0;
    while (pos <= text.size()) {
        const size_t eol = text.find('\n', pos);
        std::string line = text.substr(
            pos, eol == std::string::npos ? std::string::npos : eol - pos);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        ++line_no;

        LineLexer lex(line, line_no);
        if (lex.peek().kind != Token::Kind::end) {
            const Token head = lex.peek();
            if (head.kind != Token::Kind::ident || !keywords().count(head.text))
                lex.fail("expected one of: state, param, let, eq, bound", head.col);
            lex.take();

            if (head.text == "state") {
                bool any = false;
                while (lex.peek().kind == Token::Kind::ident) {
                    const Token t = lex.take();
                    if (keywords().count(t.text) || functions().count(t.text))
                        lex.fail("'" + t.text + "' is a reserved word", t.col);
                    if (!state_set.insert(t.text).second)
                        lex.fail("duplicate state '" + t.text + "'", t.col);
                    doc.states.push_back(t.text);
                    state_line[t.text] = line_no;
                    any = true;
                }
                if (!any) lex.fail_here("expected at least one state name");
                expect_end(lex);
            } else if (head.text == "param") {
                const std::string name = identifier(lex, "a parameter name");
                if (param_set.count(name) || state_set.count(name) ||
                    let_set.count(name))
                    lex.fail("duplicate name '" + name + "'", head.col);
                expect_op(lex, "=");
                const double value = signed_number(lex);
                expect_end(lex);
                param_set.insert(name);
                doc.params.emplace_back(name, value);
            } else if (head.text == "let") {
                const std::string name = identifier(lex, "a let name");
                if (param_set.count(name) || state_set.count(name) ||
                    let_set.count(name))
                    lex.fail("duplicate name '" + name + "'", head.col);
                expect_op(lex, "=");
                Expr e = ExprParser(lex).parse();
                expect_end(lex);
                std::set<std::string> visible = state_set;
                visible.insert(param_set.begin(), param_set.end());
                visible.insert(let_set.begin(), let_set.end()); // earlier lets only
                check_idents(e, visible);
                let_set.insert(name);
                doc.lets.emplace_back(name, std::move(e));
            } else if (head.text == "eq") {
                const Token name = lex.take();
                if (name.kind != Token::Kind::ident)
                    lex.fail("expected a state name", name.col);
                expect_op(lex, "'");
                expect_op(lex, "=");
                Expr e = ExprParser(lex).parse();
                expect_end(lex);
                if (!state_set.count(name.text))
                    lex.fail("equation for unknown state '" + name.text + "'",
                             name.col);
                std::set<std::string> visible = state_set;
                visible.insert(param_set.begin(), param_set.end());
                visible.insert(let_set.begin(), let_set.end());
                check_idents(e, visible);
                if (doc.equations.count(name.text))
                    lex.fail("duplicate equation for state '" + name.text + "'",
                             name.col);
                doc.equations.emplace(name.text, std::move(e));
            } else if (head.text == "bound") {
                const Token name = lex.take();
                if (name.kind != Token::Kind::ident)
                    lex.fail("expected a state name", name.col);
                if (!state_set.count(name.text))
                    lex.fail("bound for unknown state '" + name.text + "'", name.col);
                expect_op(lex, "=");
                expect_op(lex, "[");
                const double lo = signed_number(lex);
                expect_op(lex, ",");
                const double hi = signed_number(lex);
                expect_op(lex, "]");
                expect_end(lex);
                if (!(lo < hi))
                    lex.fail("bound for '" + name.text + "' has lo >= hi", name.col);
                doc.bounds[name.text] = {lo, hi};
            }
        }

        if (eol == std::string::npos) break;
        pos = eol + 1;
    }

    if (doc.states.empty()) throw ParseError(line_no, 1, "model declares no states");
    for (const auto& s : doc.states)
        if (!doc.equations.count(s))
            throw ParseError(state_line[s], 1, "missing equation for state '" + s + "'");
    return doc;
}

std::string print_model(const ModelDocument& doc) {
    std::string out = "state";
    for (const auto& s : doc.states) out += " " + s;
    out += "\n";
    for (const auto& [name, value] : doc.params)
        out += "param " + name + " = " + fmt_number(value) + "\n";
    for (const auto& [name, expr] : doc.lets) {
        out += "let " + name + " = ";
        print_expr(expr, 1, out);
        out += "\n";
    }
    for (const auto& s : doc.states) {
        out += "eq " + s + "' = ";
        print_expr(doc.equations.at(s), 1, out);
        out += "\n";
    }
    for (const auto& s : doc.states) {
        const auto it = doc.bounds.find(s);
        if (it == doc.bounds.end()) continue;
        out += "bound " + s + " = [" + fmt_number(it->second[0]) + ", " +
               fmt_number(it->second[1]) + "]\n";
    }
    return out;
}

namespace {

// resolved expression: identifiers become slot references
struct RExpr {
    Expr::Kind kind = Expr::Kind::number;
    double number = 0.0;
    int slot = -1;
    int slot_kind = 0; // 0 state, 1 param, 2 let
    long ipow = 0;
    Func fn = Func::exp_;
    std::vector<RExpr> kids;
};

struct Program {
    Eigen::Index dim = 0;
    std::vector<double> params;
    std::vector<RExpr> lets;
    std::vector<RExpr> equations;
};

RExpr resolve(const Expr& e, const std::map<std::string, int>& state_slot,
              const std::map<std::string, int>& param_slot,
              const std::map<std::string, int>& let_slot) {
    RExpr r;
    r.kind = e.kind;
    r.number = e.number;
    r.ipow = e.ipow;
    switch (e.kind) {
        case Expr::Kind::ident: {
            if (auto it = state_slot.find(e.name); it != state_slot.end()) {
                r.slot_kind = 0;
                r.slot = it->second;
            } else if (auto it2 = param_slot.find(e.name); it2 != param_slot.end()) {
                r.slot_kind = 1;
                r.slot = it2->second;
            } else {
                r.slot_kind = 2;
                r.slot = let_slot.at(e.name);
            }
            break;
        }
        case Expr::Kind::call: r.fn = functions().at(e.name).first; break;
        default: break;
    }
    r.kids.reserve(e.args.size());
    for (const Expr& a : e.args)
        r.kids.push_back(resolve(a, state_slot, param_slot, let_slot));
    return r;
}

template <class T>
T eval_rexpr(const RExpr& e, const T* states, const double* params, const T* lets) {
    using std::abs;
    using std::cos;
    using std::exp;
    using std::log;
    using std::max;
    using std::min;
    using std::pow;
    using std::sin;
    using std::sqrt;
    using std::tan;
    using std::tanh;
    switch (e.kind) {
        case Expr::Kind::number: return T(e.number);
        case Expr::Kind::ident:
            if (e.slot_kind == 0) return states[e.slot];
            if (e.slot_kind == 1) return T(params[e.slot]);
            return lets[e.slot];
        case Expr::Kind::neg: return -eval_rexpr(e.kids[0], states, params, lets);
        case Expr::Kind::add:
            return eval_rexpr(e.kids[0], states, params, lets) +
                   eval_rexpr(e.kids[1], states, params, lets);
        case Expr::Kind::sub:
            return eval_rexpr(e.kids[0], states, params, lets) -
                   eval_rexpr(e.kids[1], states, params, lets);
        case Expr::Kind::mul:
            return eval_rexpr(e.kids[0], states, params, lets) *
                   eval_rexpr(e.kids[1], states, params, lets);
        case Expr::Kind::div:
            return eval_rexpr(e.kids[0], states, params, lets) /
                   eval_rexpr(e.kids[1], states, params, lets);
        case Expr::Kind::pow:
            return pow(eval_rexpr(e.kids[0], states, params, lets),
                       eval_rexpr(e.kids[1], states, params, lets));
        case Expr::Kind::pow_int:
            return pow(eval_rexpr(e.kids[0], states, params, lets), e.ipow);
        case Expr::Kind::call: {
            const T a = eval_rexpr(e.kids[0], states, params, lets);
            switch (e.fn) {
                case Func::exp_: return exp(a);
                case Func::log_: return log(a);
                case Func::sin_: return sin(a);
                case Func::cos_: return cos(a);
                case Func::tan_: return tan(a);
                case Func::tanh_: return tanh(a);
                case Func::sqrt_: return sqrt(a);
                case Func::abs_: return abs(a);
                case Func::min_:
                    return min(a, eval_rexpr(e.kids[1], states, params, lets));
                case Func::max_:
                    return max(a, eval_rexpr(e.kids[1], states, params, lets));
            }
            return T(0.0);
        }
    }
    return T(0.0);
}

struct CompiledFieldFn {
    std::shared_ptr<const Program> prog;

    template <class T>
    VecT<T> operator()(const VecT<T>& x) const {
        std::vector<T> lets(prog->lets.size());
        for (size_t k = 0; k < lets.size(); ++k)
            lets[k] = eval_rexpr<T>(prog->lets[k], x.data(), prog->params.data(),
                                    lets.data());
        VecT<T> out(prog->dim);
        for (Eigen::Index i = 0; i < prog->dim; ++i)
            out[i] = eval_rexpr<T>(prog->equations[static_cast<size_t>(i)], x.data(),
                                   prog->params.data(), lets.data());
        return out;
    }
};

} // namespace

CompiledModel compile(const ModelDocument& doc, const ParamMap& overrides) {
    std::map<std::string, int> state_slot, param_slot, let_slot;
    for (size_t i = 0; i < doc.states.size(); ++i)
        state_slot[doc.states[i]] = static_cast<int>(i);
    for (size_t i = 0; i < doc.params.size(); ++i)
        param_slot[doc.params[i].first] = static_cast<int>(i);
    for (size_t i = 0; i < doc.lets.size(); ++i)
        let_slot[doc.lets[i].first] = static_cast<int>(i);

    for (const auto& [key, value] : overrides)
        if (!param_slot.count(key))
            throw UnknownParameterError("unknown parameter override '" + key + "'");

    auto prog = std::make_shared<Program>();
    prog->dim = static_cast<Eigen::Index>(doc.states.size());
    prog->params.reserve(doc.params.size());
    for (const auto& [name, value] : doc.params) {
        const auto it = overrides.find(name);
        prog->params.push_back(it == overrides.end() ? value : it->second);
    }
    for (const auto& [name, expr] : doc.lets)
        prog->lets.push_back(resolve(expr, state_slot, param_slot, let_slot));
    for (const auto& s : doc.states)
        prog->equations.push_back(
            resolve(doc.equations.at(s), state_slot, param_slot, let_slot));

    CompiledModel out{make_field(CompiledFieldFn{std::move(prog)},
                                 static_cast<Eigen::Index>(doc.states.size()),
                                 "model"),
                      std::nullopt};

    if (doc.bounds.size() == doc.states.size()) {
        Vec lo(out.field.dimension()), hi(out.field.dimension());
        for (size_t i = 0; i < doc.states.size(); ++i) {
            const auto& b = doc.bounds.at(doc.states[i]);
            lo[static_cast<Eigen::Index>(i)] = b[0];
            hi[static_cast<Eigen::Index>(i)] = b[1];
        }
        out.bounds = Box(std::move(lo), std::move(hi));
    }
    return out;
}

} // namespace dynclass
