#pragma once

#include "varlat/core.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace varlat {

/**
 * Scalar arithmetic expression over named variables, e.g. "0.5*p^2 + y*t".
 * Operators + - * / ^ (right associative), unary minus, parentheses,
 * functions sin cos tan exp log sqrt abs tanh and the constant pi.
 * Evaluation is templated on the scalar so automatic differentiation types
 * pass straight through.
 */
class Expression {
public:
    /// Throws `Error` with the column of the first offending character.
    static Expression parse(const std::string& text, const std::vector<std::string>& variables);

    const std::string& text() const { return text_; }

    /// `vars[i]` is the value of variables[i] passed to `parse`.
    template <typename S>
    S eval(const S* vars) const
    {
        return eval_node(root_, vars);
    }

    enum class Op { constant, variable, add, sub, mul, div, pow_int, pow_const, pow, neg, call };
    enum class Fn { sin, cos, tan, exp, log, sqrt, abs, tanh };

    struct Node {
        Op op = Op::constant;
        double value = 0.0;
        int index = 0; // variable index, integer exponent, or function id
        int lhs = -1;
        int rhs = -1;
    };

private:
    template <typename S>
    S eval_node(int id, const S* vars) const;

    std::string text_;
    std::vector<Node> nodes_;
    int root_ = -1;

    friend class ExpressionParser;
};

template <typename S>
S Expression::eval_node(int id, const S* vars) const
{
    using std::abs, std::cos, std::exp, std::log, std::pow, std::sin, std::sqrt, std::tan, std::tanh;
    const Node& n = nodes_[static_cast<std::size_t>(id)];
    switch (n.op) {
    case Op::constant: return S(n.value);
    case Op::variable: return vars[n.index];
    case Op::add: return eval_node(n.lhs, vars) + eval_node(n.rhs, vars);
    case Op::sub: return eval_node(n.lhs, vars) - eval_node(n.rhs, vars);
    case Op::mul: return eval_node(n.lhs, vars) * eval_node(n.rhs, vars);
    case Op::div: return eval_node(n.lhs, vars) / eval_node(n.rhs, vars);
    case Op::neg: return -eval_node(n.lhs, vars);
    case Op::pow_int: {
        const S base = eval_node(n.lhs, vars);
        S acc(1.0);
        for (int k = 0; k < n.index; ++k) acc = acc * base;
        return acc;
    }
    case Op::pow_const: return pow(eval_node(n.lhs, vars), n.value);
    case Op::pow: return exp(eval_node(n.rhs, vars) * log(eval_node(n.lhs, vars)));
    case Op::call: {
        const S x = eval_node(n.lhs, vars);
        switch (static_cast<Fn>(n.index)) {
        case Fn::sin: return sin(x);
        case Fn::cos: return cos(x);
        case Fn::tan: return tan(x);
        case Fn::exp: return exp(x);
        case Fn::log: return log(x);
        case Fn::sqrt: return sqrt(x);
        case Fn::abs: return abs(x);
        case Fn::tanh: return tanh(x);
        }
    }
    }
    return S(0.0);
}

} // namespace varlat
