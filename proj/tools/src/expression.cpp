#include "multisym_cli/expression.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

namespace multisym::cli {

ParseError::ParseError(const std::string& message, std::size_t offset)
    : std::runtime_error(message + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}

namespace {

const std::pair<const char*, Function> kFunctions[] = {
    {"sin", Function::sin}, {"cos", Function::cos}, {"exp", Function::exp}, {"log", Function::log}, {"sqrt", Function::sqrt},
};

bool lookup_function(const std::string& name, Function& fn) {
    for (const auto& [n, f] : kFunctions) {
        if (name == n) {
            fn = f;
            return true;
        }
    }
    return false;
}

NodePtr make(Node n) { return std::make_shared<const Node>(std::move(n)); }

class Parser {
public:
    Parser(const std::string& text, std::span<const std::string> allowed) : s_(text), allowed_(allowed) {}

    Expression parse() {
        skip();
        if (pos_ == s_.size()) throw ParseError("empty expression", pos_);
        NodePtr e = expr();
        skip();
        if (pos_ != s_.size()) throw ParseError(std::string("unexpected '") + s_[pos_] + "'", pos_);
        return Expression(e);
    }

private:
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr expr() {
        NodePtr lhs = term();
        while (true) {
            if (accept('+')) lhs = make({Op::add, 0.0, {}, {}, lhs, term()});
            else if (accept('-')) lhs = make({Op::subtract, 0.0, {}, {}, lhs, term()});
            else return lhs;
        }
    }

    NodePtr term() {
        NodePtr lhs = unary();
        while (true) {
            if (accept('*')) lhs = make({Op::multiply, 0.0, {}, {}, lhs, unary()});
            else if (accept('/')) lhs = make({Op::divide, 0.0, {}, {}, lhs, unary()});
            else return lhs;
        }
    }

    NodePtr unary() {
        if (accept('-')) return make({Op::negate, 0.0, {}, {}, unary(), nullptr});
        return power();
    }

    NodePtr power() {
        NodePtr base = atom();
        if (accept('^')) return make({Op::power, 0.0, {}, {}, base, unary()});
        return base;
    }

    NodePtr atom() {
        skip();
        if (pos_ == s_.size()) throw ParseError("unexpected end of expression", pos_);
        const char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr e = expr();
            if (!accept(')')) throw ParseError("expected ')'", pos_);
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
        throw ParseError(std::string("unexpected '") + c + "'", pos_);
    }

    NodePtr number() {
        const std::size_t start = pos_;
        while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
        if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
            std::size_t p = pos_ + 1;
            if (p < s_.size() && (s_[p] == '+' || s_[p] == '-')) ++p;
            if (p < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p]))) {
                pos_ = p;
                while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            }
        }
        double v = 0.0;
        const auto [end, ec] = std::from_chars(s_.data() + start, s_.data() + pos_, v);
        if (ec != std::errc() || end != s_.data() + pos_) throw ParseError("malformed number", start);
        return make({Op::number, v, {}, {}, nullptr, nullptr});
    }

    NodePtr identifier() {
        const std::size_t start = pos_;
        while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
        const std::string name = s_.substr(start, pos_ - start);
        Function fn;
        if (lookup_function(name, fn)) {
            if (!accept('(')) throw ParseError("function '" + name + "' expects '(' and one argument", pos_);
            skip();
            if (pos_ < s_.size() && s_[pos_] == ')') throw ParseError("function '" + name + "' takes exactly one argument", pos_);
            NodePtr arg = expr();
            skip();
            if (pos_ < s_.size() && s_[pos_] == ',')
                throw ParseError("function '" + name + "' takes exactly one argument", pos_);
            if (!accept(')')) throw ParseError("expected ')'", pos_);
            return make({Op::call, 0.0, {}, fn, arg, nullptr});
        }
        if (!allowed_.empty() && std::find(allowed_.begin(), allowed_.end(), name) == allowed_.end())
            throw ParseError("unknown identifier '" + name + "'", start);
        skip();
        if (pos_ < s_.size() && s_[pos_] == '(') throw ParseError("'" + name + "' is not a function", start);
        return make({Op::variable, 0.0, name, {}, nullptr, nullptr});
    }

    const std::string& s_;
    std::span<const std::string> allowed_;
    std::size_t pos_ = 0;
};

int precedence(const Node& n) {
    switch (n.op) {
        case Op::add:
        case Op::subtract: return 1;
        case Op::multiply:
        case Op::divide: return 2;
        case Op::negate: return 3;
        case Op::power: return 4;
        default: return 5;
    }
}

void print_node(const Node& n, std::ostream& out);

void print_child(const Node& n, bool parens, std::ostream& out) {
    if (parens) out << '(';
    print_node(n, out);
    if (parens) out << ')';
}

void print_node(const Node& n, std::ostream& out) {
    const int p = precedence(n);
    switch (n.op) {
        case Op::number: {
            char buf[32];
            const auto r = std::to_chars(buf, buf + sizeof buf, n.value);
            out.write(buf, r.ptr - buf);
            return;
        }
        case Op::variable: out << n.name; return;
        case Op::call:
            out << function_name(n.fn) << '(';
            print_node(*n.lhs, out);
            out << ')';
            return;
        case Op::negate:
            out << '-';
            print_child(*n.lhs, precedence(*n.lhs) < 3, out);
            return;
        case Op::power:
            print_child(*n.lhs, precedence(*n.lhs) < 5, out);
            out << '^';
            print_child(*n.rhs, precedence(*n.rhs) < 3, out);
            return;
        default: {
            const char* sym = n.op == Op::add ? " + " : n.op == Op::subtract ? " - " : n.op == Op::multiply ? "*" : "/";
            print_child(*n.lhs, precedence(*n.lhs) < p, out);
            out << sym;
            print_child(*n.rhs, precedence(*n.rhs) <= p, out);
            return;
        }
    }
}

void collect(const NodePtr& n, std::set<std::string>& names) {
    if (!n) return;
    if (n->op == Op::variable) names.insert(n->name);
    collect(n->lhs, names);
    collect(n->rhs, names);
}

bool as_number(const Expression& e, double& v) {
    const Node& n = *e.root();
    if (n.op == Op::number) {
        v = n.value;
        return true;
    }
    if (n.op == Op::negate && n.lhs->op == Op::number) {
        v = -n.lhs->value;
        return true;
    }
    return false;
}

bool is_value(const Expression& e, double target) {
    double v;
    return as_number(e, v) && v == target;
}

// Folding constructors used by differentiation.
Expression f_add(const Expression& a, const Expression& b) {
    double x, y;
    if (as_number(a, x) && as_number(b, y)) return constant(x + y);
    if (is_value(a, 0.0)) return b;
    if (is_value(b, 0.0)) return a;
    return binary(Op::add, a, b);
}

Expression f_neg(const Expression& a) {
    double x;
    if (as_number(a, x)) return constant(-x);
    if (a.root()->op == Op::negate) return Expression(a.root()->lhs);
    return unary(Op::negate, a);
}

Expression f_sub(const Expression& a, const Expression& b) {
    double x, y;
    if (as_number(a, x) && as_number(b, y)) return constant(x - y);
    if (is_value(b, 0.0)) return a;
    if (is_value(a, 0.0)) return f_neg(b);
    return binary(Op::subtract, a, b);
}

Expression f_mul(const Expression& a, const Expression& b) {
    double x, y;
    if (as_number(a, x) && as_number(b, y)) return constant(x * y);
    if (is_value(a, 0.0) || is_value(b, 0.0)) return constant(0.0);
    if (is_value(a, 1.0)) return b;
    if (is_value(b, 1.0)) return a;
    if (is_value(a, -1.0)) return f_neg(b);
    if (is_value(b, -1.0)) return f_neg(a);
    return binary(Op::multiply, a, b);
}

Expression f_div(const Expression& a, const Expression& b) {
    if (is_value(a, 0.0)) return constant(0.0);
    if (is_value(b, 1.0)) return a;
    return binary(Op::divide, a, b);
}

Expression f_pow(const Expression& a, const Expression& b) {
    if (is_value(b, 1.0)) return a;
    if (is_value(b, 0.0)) return constant(1.0);
    return binary(Op::power, a, b);
}

Expression derive(const Expression& e, const std::string& v) {
    const Node& n = *e.root();
    const Expression L = n.lhs ? Expression(n.lhs) : Expression();
    const Expression R = n.rhs ? Expression(n.rhs) : Expression();
    switch (n.op) {
        case Op::number: return constant(0.0);
        case Op::variable: return constant(n.name == v ? 1.0 : 0.0);
        case Op::negate: return f_neg(derive(L, v));
        case Op::add: return f_add(derive(L, v), derive(R, v));
        case Op::subtract: return f_sub(derive(L, v), derive(R, v));
        case Op::multiply: return f_add(f_mul(derive(L, v), R), f_mul(L, derive(R, v)));
        case Op::divide: {
            const Expression dl = derive(L, v);
            const Expression dr = derive(R, v);
            if (is_value(dr, 0.0)) return f_div(dl, R);
            return f_div(f_sub(f_mul(dl, R), f_mul(L, dr)), f_pow(R, constant(2.0)));
        }
        case Op::power: {
            const Expression dl = derive(L, v);
            const Expression dr = derive(R, v);
            double c;
            if (as_number(R, c)) return f_mul(f_mul(constant(c), f_pow(L, constant(c - 1.0))), dl);
            // d(a^b) = a^b (b' log a + b a' / a)
            return f_mul(e, f_add(f_mul(dr, call(Function::log, L)), f_div(f_mul(R, dl), L)));
        }
        case Op::call: {
            const Expression da = derive(L, v);
            if (is_value(da, 0.0)) return constant(0.0);
            switch (n.fn) {
                case Function::sin: return f_mul(call(Function::cos, L), da);
                case Function::cos: return f_neg(f_mul(call(Function::sin, L), da));
                case Function::exp: return f_mul(e, da);
                case Function::log: return f_div(da, L);
                case Function::sqrt: return f_div(da, f_mul(constant(2.0), e));
            }
        }
    }
    return constant(0.0);
}

}  // namespace

bool operator==(const Node& a, const Node& b) {
    if (a.op != b.op) return false;
    switch (a.op) {
        case Op::number: return a.value == b.value;
        case Op::variable: return a.name == b.name;
        case Op::call:
            if (a.fn != b.fn) return false;
            break;
        default: break;
    }
    const auto same = [](const NodePtr& x, const NodePtr& y) { return (!x && !y) || (x && y && *x == *y); };
    return same(a.lhs, b.lhs) && same(a.rhs, b.rhs);
}

bool operator==(const Expression& a, const Expression& b) {
    if (!a.root_ || !b.root_) return !a.root_ && !b.root_;
    return *a.root_ == *b.root_;
}

std::vector<std::string> Expression::variables() const {
    std::set<std::string> names;
    collect(root_, names);
    return {names.begin(), names.end()};
}

Expression parse_expression(const std::string& text, std::span<const std::string> allowed) {
    return Parser(text, allowed).parse();
}

std::string print(const Expression& e) {
    if (e.empty()) return {};
    std::ostringstream out;
    print_node(*e.root(), out);
    return out.str();
}

Expression differentiate(const Expression& e, const std::string& variable) {
    if (e.empty()) throw std::invalid_argument("cannot differentiate an empty expression");
    return derive(e, variable);
}

Expression constant(double value) {
    if (std::signbit(value) && value != 0.0)
        return Expression(make({Op::negate, 0.0, {}, {}, make({Op::number, -value, {}, {}, nullptr, nullptr}), nullptr}));
    return Expression(make({Op::number, value == 0.0 ? 0.0 : value, {}, {}, nullptr, nullptr}));
}

Expression variable(const std::string& name) { return Expression(make({Op::variable, 0.0, name, {}, nullptr, nullptr})); }

Expression unary(Op op, const Expression& operand) {
    if (op != Op::negate) throw std::invalid_argument("unary: only negation is a unary operator");
    return Expression(make({op, 0.0, {}, {}, operand.root(), nullptr}));
}

Expression binary(Op op, const Expression& lhs, const Expression& rhs) {
    if (op != Op::add && op != Op::subtract && op != Op::multiply && op != Op::divide && op != Op::power)
        throw std::invalid_argument("binary: not a binary operator");
    return Expression(make({op, 0.0, {}, {}, lhs.root(), rhs.root()}));
}

Expression call(Function fn, const Expression& argument) {
    return Expression(make({Op::call, 0.0, {}, fn, argument.root(), nullptr}));
}

const char* function_name(Function fn) {
    for (const auto& [n, f] : kFunctions)
        if (f == fn) return n;
    return "?";
}

CompiledExpression::CompiledExpression(const Expression& e, std::span<const std::string> slots) : expr_(e) {
    if (e.empty()) throw ParseError("empty expression", 0);
    emit(*e.root(), slots, code_);
}

void CompiledExpression::emit(const Node& n, std::span<const std::string> slots, std::vector<Instr>& out) {
    if (n.lhs) emit(*n.lhs, slots, out);
    if (n.rhs) emit(*n.rhs, slots, out);
    int slot = -1;
    if (n.op == Op::variable) {
        const auto it = std::find(slots.begin(), slots.end(), n.name);
        if (it == slots.end()) throw ParseError("unknown identifier '" + n.name + "'", 0);
        slot = static_cast<int>(it - slots.begin());
    }
    out.push_back(Instr{n.op, n.fn, n.value, slot});
}

double CompiledExpression::operator()(std::span<const double> values) const {
    if (code_.empty()) throw DomainError("evaluating an empty expression");
    double stack[64];
    std::vector<double> heap;
    const bool small = code_.size() <= 64;
    if (!small) heap.resize(code_.size());
    double* st = small ? stack : heap.data();
    std::size_t top = 0;
    for (const Instr& in : code_) {
        switch (in.op) {
            case Op::number: st[top++] = in.value; break;
            case Op::variable: st[top++] = values[static_cast<std::size_t>(in.slot)]; break;
            case Op::negate: st[top - 1] = -st[top - 1]; break;
            case Op::call: {
                double& a = st[top - 1];
                switch (in.fn) {
                    case Function::sin: a = std::sin(a); break;
                    case Function::cos: a = std::cos(a); break;
                    case Function::exp: a = std::exp(a); break;
                    case Function::log:
                        if (!(a > 0.0)) throw DomainError("log of a nonpositive value");
                        a = std::log(a);
                        break;
                    case Function::sqrt:
                        if (a < 0.0) throw DomainError("sqrt of a negative value");
                        a = std::sqrt(a);
                        break;
                }
                break;
            }
            default: {
                const double b = st[--top];
                double& a = st[top - 1];
                switch (in.op) {
                    case Op::add: a += b; break;
                    case Op::subtract: a -= b; break;
                    case Op::multiply: a *= b; break;
                    case Op::divide:
                        if (b == 0.0) throw DomainError("division by zero");
                        a /= b;
                        break;
                    case Op::power: {
                        const double r = std::pow(a, b);
                        if (std::isnan(r)) throw DomainError("power of a negative base with non-integer exponent");
                        a = r;
                        break;
                    }
                    default: break;
                }
            }
        }
    }
    const double r = st[0];
    if (!std::isfinite(r)) throw DomainError("expression value is not finite");
    return r;
}

}  // namespace multisym::cli
