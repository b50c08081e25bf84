#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <string_view>

#include <json.hpp>

namespace lleekit {

enum class ExprKind : std::uint8_t { Action, Zero, Plus, Seq, Star };

/*
 * Immutable 1-free regular expression.
 *
 * Grammar:  e ::= a | 0 | e + e | e . e | e * e
 * where `*` is the binary star: `e1 * e2` iterates e1 and exits with e2.
 * There is no unit expression.
 *
 * Values share their sub-trees; copying is O(1). Equality is structural and
 * coincides with syntactic identity.
 */
class Expr {
public:
    static Expr action(std::string name);
    static Expr zero();
    static Expr plus(Expr left, Expr right);
    static Expr seq(Expr left, Expr right);
    static Expr star(Expr left, Expr right);

    ExprKind kind() const noexcept { return node_->kind; }
    bool is_action() const noexcept { return kind() == ExprKind::Action; }
    bool is_zero() const noexcept { return kind() == ExprKind::Zero; }

    /// Action name; empty unless kind() == Action.
    const std::string& name() const noexcept { return node_->name; }
    /// Operands of a binary constructor. Undefined for atoms.
    const Expr& left() const noexcept { return *node_->left; }
    const Expr& right() const noexcept { return *node_->right; }

    /// Number of AST nodes.
    std::size_t size() const noexcept { return node_->size; }
    std::size_t hash() const noexcept { return node_->hash; }

    friend bool operator==(const Expr& a, const Expr& b) noexcept;
    /// Arbitrary but fixed total order, consistent with ==.
    friend std::strong_ordering operator<=>(const Expr& a, const Expr& b) noexcept;

private:
    struct Node {
        ExprKind kind;
        std::string name;
        std::unique_ptr<Expr> left;
        std::unique_ptr<Expr> right;
        std::size_t size;
        std::size_t hash;
    };
    explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    static Expr binary(ExprKind kind, Expr left, Expr right);

    std::shared_ptr<const Node> node_;
};

/// True iff `name` matches [a-z][a-z0-9_]*.
bool is_action_name(std::string_view name) noexcept;

/// Parses the concrete syntax. Precedence `+` < `.` < `*`; `+` and `.` are
/// left-associative, `*` is non-associative. Throws SyntaxError / AssocError.
Expr parse(std::string_view text);

/// Minimal-parentheses rendering; parse(print(e)) == e.
std::string print(const Expr& e);

std::ostream& operator<<(std::ostream& os, const Expr& e);

/// Tagged-union JSON AST, e.g. {"tag":"star","left":{...},"right":{...}}.
nlohmann::json to_json(const Expr& e);
Expr expr_from_json(const nlohmann::json& j);

} // namespace lleekit

template <>
struct std::hash<lleekit::Expr> {
    std::size_t operator()(const lleekit::Expr& e) const noexcept { return e.hash(); }
};
