#include "gm4/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <sstream>

namespace gm4 {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Token {
    enum Type { Number, Ident, Op, End } type;
    double number = 0.0;
    std::string text;
    int line = 1, col = 1;
};

class Lexer {
public:
    Lexer(const std::string& src, int line_offset) : src_(src), line_(line_offset) { advance(); }
    const Token& peek() const { return tok_; }
    Token take() {
        Token t = tok_;
        advance();
        return t;
    }

private:
    void advance() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) {
            if (src_[pos_] == '\n') { ++line_; col_ = 0; }
            ++pos_;
            ++col_;
        }
        tok_.line = line_;
        tok_.col = col_;
        if (pos_ >= src_.size()) {
            tok_.type = Token::End;
            return;
        }
        const char c = src_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            const char* start = src_.c_str() + pos_;
            char* end = nullptr;
            tok_.number = std::strtod(start, &end);
            if (end == start) throw ParseError("malformed number", line_, col_);
            const auto len = static_cast<size_t>(end - start);
            tok_.text = src_.substr(pos_, len);
            pos_ += len;
            col_ += static_cast<int>(len);
            tok_.type = Token::Number;
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t n = 0;
            while (pos_ + n < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_ + n])) || src_[pos_ + n] == '_'))
                ++n;
            tok_.type = Token::Ident;
            tok_.text = src_.substr(pos_, n);
            pos_ += n;
            col_ += static_cast<int>(n);
            return;
        }
        if (std::string("+-*/^()").find(c) != std::string::npos) {
            tok_.type = Token::Op;
            tok_.text = std::string(1, c);
            ++pos_;
            ++col_;
            return;
        }
        throw ParseError(std::string("unexpected character '") + c + "'", line_, col_);
    }

    const std::string& src_;
    size_t pos_ = 0;
    Token tok_;
    int line_, col_ = 1;
};

ExprPtr make(Expr::Kind k, ExprPtr a = nullptr, ExprPtr b = nullptr) {
    auto e = std::make_shared<Expr>();
    e->kind = k;
    e->a = std::move(a);
    e->b = std::move(b);
    return e;
}

class Parser {
public:
    explicit Parser(Lexer& lex) : lex_(lex) {}

    ExprPtr parse() {
        ExprPtr e = sum();
        const Token& t = lex_.peek();
        if (t.type != Token::End)
            throw ParseError("unexpected trailing input '" + t.text + "'", t.line, t.col);
        return e;
    }

private:
    bool accept_op(const char* op) {
        const Token& t = lex_.peek();
        if (t.type == Token::Op && t.text == op) {
            lex_.take();
            return true;
        }
        return false;
    }
    void expect_op(const char* op) {
        const Token& t = lex_.peek();
        if (t.type != Token::Op || t.text != op)
            throw ParseError(std::string("expected '") + op + "'", t.line, t.col);
        lex_.take();
    }

    ExprPtr sum() {
        ExprPtr e = term();
        for (;;) {
            if (accept_op("+")) e = make(Expr::Kind::Add, e, term());
            else if (accept_op("-")) e = make(Expr::Kind::Sub, e, term());
            else return e;
        }
    }
    ExprPtr term() {
        ExprPtr e = factor();
        for (;;) {
            if (accept_op("*")) e = make(Expr::Kind::Mul, e, factor());
            else if (accept_op("/")) e = make(Expr::Kind::Div, e, factor());
            else return e;
        }
    }
    ExprPtr factor() {
        if (accept_op("-")) return make(Expr::Kind::Neg, factor());
        return power();
    }
    ExprPtr power() {
        ExprPtr base = atom();
        if (accept_op("^")) {
            const Token t = lex_.peek();
            int sign = 1;
            if (accept_op("-")) sign = -1;
            const Token e = lex_.take();
            if (e.type != Token::Number || e.text.find_first_of(".eE") != std::string::npos)
                throw ParseError("exponent must be an integer literal", t.line, t.col);
            auto node = make(Expr::Kind::Pow, base);
            const_cast<Expr*>(node.get())->exponent = sign * static_cast<int>(e.number);
            return node;
        }
        return base;
    }
    ExprPtr atom() {
        const Token t = lex_.take();
        if (t.type == Token::Number) {
            auto e = make(Expr::Kind::Number);
            const_cast<Expr*>(e.get())->number = t.number;
            return e;
        }
        if (t.type == Token::Ident) {
            if (t.text == "u") return make(Expr::Kind::VarU);
            if (t.text == "v") return make(Expr::Kind::VarV);
            if (t.text == "s") return make(Expr::Kind::VarU);  // glue-curve parameter
            if (t.text == "pi") {
                auto e = make(Expr::Kind::Number);
                const_cast<Expr*>(e.get())->number = kPi;
                return e;
            }
            if (t.text == "sqrt" || t.text == "sin" || t.text == "cos") {
                expect_op("(");
                ExprPtr arg = sum();
                expect_op(")");
                const Expr::Kind k = t.text == "sqrt" ? Expr::Kind::Sqrt
                                   : t.text == "sin" ? Expr::Kind::Sin
                                                     : Expr::Kind::Cos;
                return make(k, arg);
            }
            const Token& nxt = lex_.peek();
            if (nxt.type == Token::Op && nxt.text == "(")
                throw ParseError("unknown function '" + t.text + "'", t.line, t.col);
            auto e = make(Expr::Kind::Param);
            const_cast<Expr*>(e.get())->name = t.text;
            return e;
        }
        if (t.type == Token::Op && t.text == "(") {
            ExprPtr e = sum();
            expect_op(")");
            return e;
        }
        throw ParseError("expected a value", t.line, t.col);
    }

    Lexer& lex_;
};

}  // namespace

ExprPtr parse_expr(const std::string& src, int line_offset) {
    Lexer lex(src, line_offset);
    Parser p(lex);
    return p.parse();
}

double Expr::eval(double u, double v, const ParamTable& params) const {
    switch (kind) {
        case Kind::Number: return number;
        case Kind::VarU: return u;
        case Kind::VarV: return v;
        case Kind::Param: {
            auto it = params.find(name);
            if (it == params.end()) throw UnknownIdentifier(name);
            return it->second;
        }
        case Kind::Neg: return -a->eval(u, v, params);
        case Kind::Add: return a->eval(u, v, params) + b->eval(u, v, params);
        case Kind::Sub: return a->eval(u, v, params) - b->eval(u, v, params);
        case Kind::Mul: return a->eval(u, v, params) * b->eval(u, v, params);
        case Kind::Div: return a->eval(u, v, params) / b->eval(u, v, params);
        case Kind::Pow: return std::pow(a->eval(u, v, params), exponent);
        case Kind::Sqrt: {
            const double x = a->eval(u, v, params);
            if (!(x > 0.0)) throw DomainError("sqrt of non-positive value");
            return std::sqrt(x);
        }
        case Kind::Sin: return std::sin(a->eval(u, v, params));
        case Kind::Cos: return std::cos(a->eval(u, v, params));
    }
    return 0.0;
}

Jet2 Expr::eval_jet(double u0, double v0, int order, const ParamTable& params) const {
    switch (kind) {
        case Kind::Number: return Jet2::constant(number, order);
        case Kind::VarU: return Jet2::variable(u0, 0, order);
        case Kind::VarV: return Jet2::variable(v0, 1, order);
        case Kind::Param: {
            auto it = params.find(name);
            if (it == params.end()) throw UnknownIdentifier(name);
            return Jet2::constant(it->second, order);
        }
        case Kind::Neg: return -a->eval_jet(u0, v0, order, params);
        case Kind::Add: return a->eval_jet(u0, v0, order, params) + b->eval_jet(u0, v0, order, params);
        case Kind::Sub: return a->eval_jet(u0, v0, order, params) - b->eval_jet(u0, v0, order, params);
        case Kind::Mul: return a->eval_jet(u0, v0, order, params) * b->eval_jet(u0, v0, order, params);
        case Kind::Div: return a->eval_jet(u0, v0, order, params) / b->eval_jet(u0, v0, order, params);
        case Kind::Pow: return jet_pow(a->eval_jet(u0, v0, order, params), exponent);
        case Kind::Sqrt: return jet_sqrt(a->eval_jet(u0, v0, order, params));
        case Kind::Sin: return jet_sin(a->eval_jet(u0, v0, order, params));
        case Kind::Cos: return jet_cos(a->eval_jet(u0, v0, order, params));
    }
    return Jet2();
}

std::string Expr::print() const {
    std::ostringstream os;
    switch (kind) {
        case Kind::Number: {
            os.precision(17);
            os << number;
            break;
        }
        case Kind::VarU: os << "u"; break;
        case Kind::VarV: os << "v"; break;
        case Kind::Param: os << name; break;
        case Kind::Neg: os << "(-" << a->print() << ")"; break;
        case Kind::Add: os << "(" << a->print() << "+" << b->print() << ")"; break;
        case Kind::Sub: os << "(" << a->print() << "-" << b->print() << ")"; break;
        case Kind::Mul: os << "(" << a->print() << "*" << b->print() << ")"; break;
        case Kind::Div: os << "(" << a->print() << "/" << b->print() << ")"; break;
        case Kind::Pow: os << "(" << a->print() << "^" << exponent << ")"; break;
        case Kind::Sqrt: os << "sqrt(" << a->print() << ")"; break;
        case Kind::Sin: os << "sin(" << a->print() << ")"; break;
        case Kind::Cos: os << "cos(" << a->print() << ")"; break;
    }
    return os.str();
}

bool Expr::structurally_equal(const Expr& o) const {
    if (kind != o.kind) return false;
    switch (kind) {
        case Kind::Number: return number == o.number;
        case Kind::VarU:
        case Kind::VarV: return true;
        case Kind::Param: return name == o.name;
        case Kind::Pow: return exponent == o.exponent && a->structurally_equal(*o.a);
        case Kind::Neg:
        case Kind::Sqrt:
        case Kind::Sin:
        case Kind::Cos: return a->structurally_equal(*o.a);
        default: return a->structurally_equal(*o.a) && b->structurally_equal(*o.b);
    }
}

void Expr::collect_params(std::vector<std::string>& out) const {
    if (kind == Kind::Param) out.push_back(name);
    if (a) a->collect_params(out);
    if (b) b->collect_params(out);
}

}  // namespace gm4
