#pragma once

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "folicheck/dual.hpp"
#include "folicheck/errors.hpp"

namespace folicheck {

// ============================================================================
// Expression DSL
//
// Grammar (whitespace-insensitive, left-associative):
//   expr   := term (('+'|'-') term)*
//   term   := unary (('*'|'/') unary)*
//   unary  := '-' unary | power
//   power  := atom ('^' integer)*
//   atom   := number | 'pi' | name '(' expr ')' | name | '(' expr ')'
//
// Precedence: ^  >  unary -  >  * /  >  + -.
// Exponents are integer literals only, so x^k never hits a branch cut.
// ============================================================================

enum class Fun { Sin, Cos, Exp, Sqrt, Abs };

inline const char* fun_name(Fun f) {
    switch (f) {
        case Fun::Sin: return "sin";
        case Fun::Cos: return "cos";
        case Fun::Exp: return "exp";
        case Fun::Sqrt: return "sqrt";
        case Fun::Abs: return "abs";
    }
    return "?";
}

struct ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;

struct ExprNode {
    enum class Kind { Num, Pi, Var, Neg, Call, Add, Sub, Mul, Div, Pow };

    Kind kind;
    double num = 0;           // Num
    std::string name;         // Var
    Fun fun = Fun::Sin;       // Call
    long expo = 0;            // Pow
    ExprPtr a, b;             // children

    static ExprPtr number(double v) {
        auto n = std::make_shared<ExprNode>();
        n->kind = Kind::Num;
        n->num = v;
        return n;
    }
    static ExprPtr pi() {
        auto n = std::make_shared<ExprNode>();
        n->kind = Kind::Pi;
        return n;
    }
    static ExprPtr var(std::string v) {
        auto n = std::make_shared<ExprNode>();
        n->kind = Kind::Var;
        n->name = std::move(v);
        return n;
    }
    static ExprPtr neg(ExprPtr x) {
        auto n = std::make_shared<ExprNode>();
        n->kind = Kind::Neg;
        n->a = std::move(x);
        return n;
    }
    static ExprPtr call(Fun f, ExprPtr x) {
        auto n = std::make_shared<ExprNode>();
        n->kind = Kind::Call;
        n->fun = f;
        n->a = std::move(x);
        return n;
    }
    static ExprPtr binary(Kind k, ExprPtr x, ExprPtr y) {
        auto n = std::make_shared<ExprNode>();
        n->kind = k;
        n->a = std::move(x);
        n->b = std::move(y);
        return n;
    }
    static ExprPtr pow(ExprPtr x, long k) {
        auto n = std::make_shared<ExprNode>();
        n->kind = Kind::Pow;
        n->a = std::move(x);
        n->expo = k;
        return n;
    }
};

/// Immutable expression; value type wrapping a shared tree.
struct Expr {
    ExprPtr root;
    bool valid() const { return root != nullptr; }
};

inline bool struct_equal(const ExprPtr& x, const ExprPtr& y) {
    if (!x || !y) return x == y;
    if (x->kind != y->kind) return false;
    using K = ExprNode::Kind;
    switch (x->kind) {
        case K::Num: return x->num == y->num;
        case K::Pi: return true;
        case K::Var: return x->name == y->name;
        case K::Neg: return struct_equal(x->a, y->a);
        case K::Call: return x->fun == y->fun && struct_equal(x->a, y->a);
        case K::Pow: return x->expo == y->expo && struct_equal(x->a, y->a);
        default: return struct_equal(x->a, y->a) && struct_equal(x->b, y->b);
    }
}

inline bool operator==(const Expr& x, const Expr& y) { return struct_equal(x.root, y.root); }

// ----------------------------------------------------------------------------
// Parsing
// ----------------------------------------------------------------------------

namespace detail {

struct Lexer {
    const std::string& src;
    std::size_t pos = 0;

    explicit Lexer(const std::string& s) : src(s) {}

    void skip_ws() {
        while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
    }
    bool eof() {
        skip_ws();
        return pos >= src.size();
    }
    char peek() {
        skip_ws();
        return pos < src.size() ? src[pos] : '\0';
    }
    bool accept(char c) {
        skip_ws();
        if (pos < src.size() && src[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    void expect(char c, std::vector<std::string> expected) {
        if (!accept(c)) fail(std::move(expected));
    }
    [[noreturn]] void fail(std::vector<std::string> expected) {
        skip_ws();
        std::string got = pos < src.size() ? std::string(1, src[pos]) : std::string("end of input");
        std::string msg = "syntax error at byte " + std::to_string(pos) + ": got '" + got + "', expected ";
        for (std::size_t i = 0; i < expected.size(); ++i) msg += (i ? ", " : "") + expected[i];
        throw SyntaxError(pos, std::move(expected), msg);
    }

    bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
    bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

    std::string read_ident() {
        skip_ws();
        std::size_t start = pos;
        while (pos < src.size() && ident_char(src[pos])) ++pos;
        return src.substr(start, pos - start);
    }

    double read_number() {
        skip_ws();
        std::size_t start = pos;
        bool any_digit = false;
        while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos, any_digit = true;
        if (pos < src.size() && src[pos] == '.') {
            ++pos;
            while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos, any_digit = true;
        }
        if (!any_digit) fail({"number"});
        if (pos < src.size() && (src[pos] == 'e' || src[pos] == 'E')) {
            std::size_t mark = pos;
            ++pos;
            if (pos < src.size() && (src[pos] == '+' || src[pos] == '-')) ++pos;
            if (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) {
                while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
            } else {
                pos = mark;  // 'e' belongs to a following identifier, not this literal
            }
        }
        return std::strtod(src.substr(start, pos - start).c_str(), nullptr);
    }

    long read_int_exponent() {
        skip_ws();
        std::size_t start = pos;
        bool negative = false;
        if (pos < src.size() && src[pos] == '-') {
            negative = true;
            ++pos;
        }
        std::size_t digits = pos;
        while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
        if (pos == digits) {
            pos = start;
            fail({"integer exponent"});
        }
        if (pos < src.size() && (src[pos] == '.' || src[pos] == 'e' || src[pos] == 'E')) {
            pos = start;
            fail({"integer exponent"});
        }
        long v = std::strtol(src.substr(digits, pos - digits).c_str(), nullptr, 10);
        return negative ? -v : v;
    }
};

struct Parser {
    Lexer lx;

    explicit Parser(const std::string& s) : lx(s) {}

    ExprPtr parse_expr() {
        ExprPtr e = parse_term();
        while (true) {
            if (lx.accept('+'))
                e = ExprNode::binary(ExprNode::Kind::Add, e, parse_term());
            else if (lx.accept('-'))
                e = ExprNode::binary(ExprNode::Kind::Sub, e, parse_term());
            else
                return e;
        }
    }

    ExprPtr parse_term() {
        ExprPtr e = parse_unary();
        while (true) {
            if (lx.accept('*'))
                e = ExprNode::binary(ExprNode::Kind::Mul, e, parse_unary());
            else if (lx.accept('/'))
                e = ExprNode::binary(ExprNode::Kind::Div, e, parse_unary());
            else
                return e;
        }
    }

    ExprPtr parse_unary() {
        if (lx.accept('-')) return ExprNode::neg(parse_unary());
        return parse_power();
    }

    ExprPtr parse_power() {
        ExprPtr e = parse_atom();
        while (lx.accept('^')) e = ExprNode::pow(e, lx.read_int_exponent());
        return e;
    }

    ExprPtr parse_atom() {
        char c = lx.peek();
        if (c == '(') {
            lx.accept('(');
            ExprPtr e = parse_expr();
            lx.expect(')', {")"});
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return ExprNode::number(lx.read_number());
        if (lx.ident_start(c)) {
            std::size_t at = lx.pos;
            std::string name = lx.read_ident();
            if (lx.peek() == '(') {
                Fun f;
                if (name == "sin") f = Fun::Sin;
                else if (name == "cos") f = Fun::Cos;
                else if (name == "exp") f = Fun::Exp;
                else if (name == "sqrt") f = Fun::Sqrt;
                else if (name == "abs") f = Fun::Abs;
                else throw UnknownFunction(at, name);
                lx.accept('(');
                ExprPtr arg = parse_expr();
                lx.expect(')', {")"});
                return ExprNode::call(f, arg);
            }
            if (name == "pi") return ExprNode::pi();
            return ExprNode::var(name);
        }
        lx.fail({"number", "identifier", "(", "-"});
    }
};

}  // namespace detail

inline Expr parse(const std::string& src) {
    detail::Parser p(src);
    ExprPtr e = p.parse_expr();
    if (!p.lx.eof()) p.lx.fail({"operator", "end of input"});
    return Expr{e};
}

// ----------------------------------------------------------------------------
// Printing (minimal parentheses; parse(print(e)) is structurally equal to e)
// ----------------------------------------------------------------------------

namespace detail {

inline int level(const ExprNode& n) {
    using K = ExprNode::Kind;
    switch (n.kind) {
        case K::Add:
        case K::Sub: return 1;
        case K::Mul:
        case K::Div: return 2;
        case K::Neg: return 3;
        case K::Pow: return 4;
        default: return 5;
    }
}

inline void print_rec(const ExprPtr& n, int parent_level, bool right_side, std::string& out) {
    using K = ExprNode::Kind;
    int my = level(*n);
    bool parens = my < parent_level || (my == parent_level && right_side);
    if (parens) out += '(';
    switch (n->kind) {
        case K::Num: {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", n->num);
            out += buf;
            break;
        }
        case K::Pi: out += "pi"; break;
        case K::Var: out += n->name; break;
        case K::Neg:
            out += '-';
            print_rec(n->a, 3, false, out);
            break;
        case K::Call:
            out += fun_name(n->fun);
            out += '(';
            print_rec(n->a, 0, false, out);
            out += ')';
            break;
        case K::Pow:
            print_rec(n->a, 4, false, out);
            out += '^';
            out += std::to_string(n->expo);
            break;
        case K::Add:
            print_rec(n->a, 1, false, out);
            out += " + ";
            print_rec(n->b, 1, true, out);
            break;
        case K::Sub:
            print_rec(n->a, 1, false, out);
            out += " - ";
            print_rec(n->b, 1, true, out);
            break;
        case K::Mul:
            print_rec(n->a, 2, false, out);
            out += "*";
            print_rec(n->b, 2, true, out);
            break;
        case K::Div:
            print_rec(n->a, 2, false, out);
            out += "/";
            print_rec(n->b, 2, true, out);
            break;
    }
    if (parens) out += ')';
}

}  // namespace detail

inline std::string print(const Expr& e) {
    std::string out;
    detail::print_rec(e.root, 0, false, out);
    return out;
}

inline void collect_vars(const ExprPtr& n, std::set<std::string>& out) {
    if (!n) return;
    if (n->kind == ExprNode::Kind::Var) out.insert(n->name);
    collect_vars(n->a, out);
    collect_vars(n->b, out);
}

inline std::set<std::string> free_vars(const Expr& e) {
    std::set<std::string> out;
    collect_vars(e.root, out);
    return out;
}

// ----------------------------------------------------------------------------
// Compiled evaluation
//
// Expressions are flattened once into a postfix program with parameter values
// inlined as constants and variables resolved to slots; evaluation is then a
// tight stack loop usable with any derivative scalar.
// ----------------------------------------------------------------------------

struct Program {
    enum class Op : unsigned char { PushNum, PushVar, Neg, Add, Sub, Mul, Div, Pow, Call };
    struct Ins {
        Op op;
        Fun fun = Fun::Sin;
        int slot = 0;
        long expo = 0;
        double num = 0;
    };
    std::vector<Ins> code;
    int nvars = 0;
};

inline void compile_rec(const ExprPtr& n, const std::vector<std::string>& var_names,
                        const std::map<std::string, double>& params, Program& prog) {
    using K = ExprNode::Kind;
    using Op = Program::Op;
    switch (n->kind) {
        case K::Num: prog.code.push_back({Op::PushNum, Fun::Sin, 0, 0, n->num}); break;
        case K::Pi: prog.code.push_back({Op::PushNum, Fun::Sin, 0, 0, std::acos(-1.0)}); break;
        case K::Var: {
            for (std::size_t i = 0; i < var_names.size(); ++i) {
                if (var_names[i] == n->name) {
                    prog.code.push_back({Op::PushVar, Fun::Sin, static_cast<int>(i), 0, 0});
                    return;
                }
            }
            auto it = params.find(n->name);
            if (it == params.end())
                throw ValidationError("unbound-variable", "unbound variable '" + n->name + "'");
            prog.code.push_back({Op::PushNum, Fun::Sin, 0, 0, it->second});
            break;
        }
        case K::Neg:
            compile_rec(n->a, var_names, params, prog);
            prog.code.push_back({Op::Neg});
            break;
        case K::Call:
            compile_rec(n->a, var_names, params, prog);
            prog.code.push_back({Op::Call, n->fun});
            break;
        case K::Pow:
            compile_rec(n->a, var_names, params, prog);
            prog.code.push_back({Op::Pow, Fun::Sin, 0, n->expo, 0});
            break;
        default:
            compile_rec(n->a, var_names, params, prog);
            compile_rec(n->b, var_names, params, prog);
            prog.code.push_back({n->kind == K::Add ? Op::Add
                                 : n->kind == K::Sub ? Op::Sub
                                 : n->kind == K::Mul ? Op::Mul
                                                     : Op::Div});
            break;
    }
}

inline Program compile(const Expr& e, const std::vector<std::string>& var_names,
                       const std::map<std::string, double>& params) {
    Program prog;
    prog.nvars = static_cast<int>(var_names.size());
    compile_rec(e.root, var_names, params, prog);
    return prog;
}

template <class S>
S run_program(const Program& prog, const S* vars) {
    using std::cos;
    using std::exp;
    using std::fabs;
    using std::sin;
    using std::sqrt;
    S stack[32];
    int sp = 0;
    using Op = Program::Op;
    for (const auto& ins : prog.code) {
        switch (ins.op) {
            case Op::PushNum: stack[sp++] = S(ins.num); break;
            case Op::PushVar: stack[sp++] = vars[ins.slot]; break;
            case Op::Neg: stack[sp - 1] = -stack[sp - 1]; break;
            case Op::Add: --sp; stack[sp - 1] = stack[sp - 1] + stack[sp]; break;
            case Op::Sub: --sp; stack[sp - 1] = stack[sp - 1] - stack[sp]; break;
            case Op::Mul: --sp; stack[sp - 1] = stack[sp - 1] * stack[sp]; break;
            case Op::Div: {
                --sp;
                if (scalar_value(stack[sp]) == 0) throw DomainError("division by zero");
                stack[sp - 1] = stack[sp - 1] / stack[sp];
                break;
            }
            case Op::Pow: {
                double base = scalar_value(stack[sp - 1]);
                if (base == 0 && ins.expo <= 0)
                    throw DomainError(ins.expo == 0 ? "0^0 is undefined" : "zero base with negative exponent");
                stack[sp - 1] = pow_int(stack[sp - 1], ins.expo);
                break;
            }
            case Op::Call: {
                S& x = stack[sp - 1];
                switch (ins.fun) {
                    case Fun::Sin: x = sin(x); break;
                    case Fun::Cos: x = cos(x); break;
                    case Fun::Exp: x = exp(x); break;
                    case Fun::Sqrt: {
                        double v = scalar_value(x);
                        bool needs_deriv = !std::is_same_v<S, double>;
                        if (v < 0 || (v == 0 && needs_deriv))
                            throw DomainError("sqrt of a non-positive argument");
                        x = sqrt(x);
                        break;
                    }
                    case Fun::Abs: x = fabs(x); break;
                }
                break;
            }
        }
    }
    return stack[0];
}

// ----------------------------------------------------------------------------
// Convenience evaluation over name-keyed environments
// ----------------------------------------------------------------------------

/// Variable bindings plus named constants. `seeds` attaches a derivative seed
/// vector to each variable; all seed vectors must share one length (1 or 2).
struct Env {
    std::map<std::string, double> vars;
    std::map<std::string, double> params;
    std::map<std::string, std::vector<double>> seeds;
};

struct EvalResult {
    double value = 0;
    std::vector<double> gradient;
};

inline double eval(const Expr& e, const Env& env) {
    std::vector<std::string> names;
    std::vector<double> vals;
    for (const auto& [k, v] : env.vars) {
        names.push_back(k);
        vals.push_back(v);
    }
    Program p = compile(e, names, env.params);
    return run_program(p, vals.data());
}

template <int N>
EvalResult eval_dual_n(const Expr& e, const Env& env) {
    std::vector<std::string> names;
    std::vector<Dual<N>> vals;
    for (const auto& [k, v] : env.vars) {
        names.push_back(k);
        Dual<N> x(v);
        auto it = env.seeds.find(k);
        if (it != env.seeds.end())
            for (int i = 0; i < N; ++i) x.d[i] = it->second[i];
        vals.push_back(x);
    }
    Program p = compile(e, names, env.params);
    Dual<N> r = run_program(p, vals.data());
    EvalResult out;
    out.value = r.v;
    out.gradient.assign(r.d.begin(), r.d.end());
    return out;
}

/// Exact forward-mode derivatives in up to two seed directions.
inline EvalResult eval_dual(const Expr& e, const Env& env) {
    std::size_t width = 0;
    for (const auto& [k, s] : env.seeds) {
        if (width == 0) width = s.size();
        if (s.size() != width)
            throw ValidationError("seeds", "all derivative seed vectors must share one length");
    }
    if (width == 0) {
        EvalResult out;
        out.value = eval(e, env);
        return out;
    }
    if (width == 1) return eval_dual_n<1>(e, env);
    if (width == 2) return eval_dual_n<2>(e, env);
    throw ValidationError("seeds", "at most two seed directions are supported");
}

}  // namespace folicheck
