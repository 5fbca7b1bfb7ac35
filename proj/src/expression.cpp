#include "varlat/expression.hpp"

#include <cctype>
#include <cstdlib>
#include <numbers>

namespace varlat {

class ExpressionParser {
public:
    ExpressionParser(const std::string& text, const std::vector<std::string>& vars, Expression& out)
        : s_(text), vars_(vars), out_(out)
    {
    }

    int parse()
    {
        const int root = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return root;
    }

private:
    using Op = Expression::Op;

    [[noreturn]] void fail(const std::string& what) const
    {
        throw Error("expression \"" + s_ + "\", column " + std::to_string(pos_ + 1) + ": " + what);
    }

    void skip()
    {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool accept(char c)
    {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    int add(Expression::Node n)
    {
        out_.nodes_.push_back(n);
        return static_cast<int>(out_.nodes_.size()) - 1;
    }

    int binary(Op op, int l, int r) { return add({op, 0.0, 0, l, r}); }

    int expr()
    {
        int l = term();
        for (;;) {
            if (accept('+'))
                l = binary(Op::add, l, term());
            else if (accept('-'))
                l = binary(Op::sub, l, term());
            else
                return l;
        }
    }

    int term()
    {
        int l = unary();
        for (;;) {
            if (accept('*'))
                l = binary(Op::mul, l, unary());
            else if (accept('/'))
                l = binary(Op::div, l, unary());
            else
                return l;
        }
    }

    int unary()
    {
        if (accept('-')) return add({Op::neg, 0.0, 0, unary(), -1});
        if (accept('+')) return unary();
        return power();
    }

    int power()
    {
        const int base = primary();
        if (!accept('^')) return base;
        const int exponent = unary();
        const auto& e = out_.nodes_[static_cast<std::size_t>(exponent)];
        if (e.op == Op::constant) {
            const double v = e.value;
            if (v == std::floor(v) && v >= 0 && v <= 16) return add({Op::pow_int, 0.0, static_cast<int>(v), base, -1});
            return add({Op::pow_const, v, 0, base, -1});
        }
        return binary(Op::pow, base, exponent);
    }

    int primary()
    {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        const char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            const char* begin = s_.c_str() + pos_;
            char* end = nullptr;
            const double v = std::strtod(begin, &end);
            if (end == begin) fail("malformed number");
            pos_ += static_cast<std::size_t>(end - begin);
            return add({Op::constant, v, 0, -1, -1});
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            const std::size_t start = pos_;
            while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
            const std::string name = s_.substr(start, pos_ - start);
            if (accept('(')) {
                static const std::vector<std::string> fns{"sin", "cos", "tan", "exp", "log", "sqrt", "abs", "tanh"};
                int id = -1;
                for (std::size_t k = 0; k < fns.size(); ++k)
                    if (fns[k] == name) id = static_cast<int>(k);
                if (id < 0) {
                    pos_ = start;
                    fail("unknown function '" + name + "'");
                }
                const int arg = expr();
                if (!accept(')')) fail("expected ')'");
                return add({Op::call, 0.0, id, arg, -1});
            }
            if (name == "pi") return add({Op::constant, std::numbers::pi, 0, -1, -1});
            for (std::size_t k = 0; k < vars_.size(); ++k)
                if (vars_[k] == name) return add({Op::variable, 0.0, static_cast<int>(k), -1, -1});
            pos_ = start;
            fail("unknown variable '" + name + "'");
        }
        if (accept('(')) {
            const int inner = expr();
            if (!accept(')')) fail("expected ')'");
            return inner;
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    const std::string& s_;
    const std::vector<std::string>& vars_;
    Expression& out_;
    std::size_t pos_ = 0;
};

Expression Expression::parse(const std::string& text, const std::vector<std::string>& variables)
{
    Expression e;
    e.text_ = text;
    ExpressionParser parser(e.text_, variables, e);
    e.root_ = parser.parse();
    return e;
}

} // namespace varlat
