#pragma once

#include <memory>
#include <string>

namespace cpflow {

/// Real expression in x and y for forcings given in configuration.
///
///   expr   := term (('+' | '-') term)*
///   term   := unary (('*' | '/') unary)*
///   unary  := ('+' | '-') unary | power
///   power  := atom ('^' unary)?          right associative
///   atom   := number | 'x' | 'y' | 'pi' | func '(' expr ')' | '(' expr ')'
///   func   := sin | cos | exp
///
/// Parse errors throw ConfigError with the offending position.
class Expression {
public:
    static Expression parse(const std::string& text);

    double operator()(double x, double y) const;
    const std::string& text() const noexcept { return text_; }

    struct Node;

private:
    std::string text_;
    std::shared_ptr<const Node> root_;
};

} // namespace cpflow
