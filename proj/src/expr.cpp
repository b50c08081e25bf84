#include "lleekit/expr.hpp"

#include "lleekit/errors.hpp"

#include <cctype>
#include <ostream>

namespace lleekit {

namespace {

std::size_t mix(std::size_t seed, std::size_t value)
{
    return seed ^ (value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

int rank(ExprKind k)
{
    return static_cast<int>(k);
}

} // namespace

Expr Expr::action(std::string name)
{
    auto hash = mix(std::hash<std::string>{}(name), rank(ExprKind::Action));
    return Expr(std::make_shared<const Node>(
        Node{ExprKind::Action, std::move(name), nullptr, nullptr, 1, hash}));
}

Expr Expr::zero()
{
    static const Expr z(std::make_shared<const Node>(
        Node{ExprKind::Zero, {}, nullptr, nullptr, 1, 0x51ed270b27ULL}));
    return z;
}

Expr Expr::binary(ExprKind kind, Expr left, Expr right)
{
    auto hash = mix(mix(static_cast<std::size_t>(rank(kind)) * 0x100000001b3ULL, left.hash()),
                    right.hash());
    auto size = 1 + left.size() + right.size();
    return Expr(std::make_shared<const Node>(Node{kind, {}, std::make_unique<Expr>(std::move(left)),
                                                  std::make_unique<Expr>(std::move(right)), size,
                                                  hash}));
}

Expr Expr::plus(Expr left, Expr right) { return binary(ExprKind::Plus, std::move(left), std::move(right)); }
Expr Expr::seq(Expr left, Expr right) { return binary(ExprKind::Seq, std::move(left), std::move(right)); }
Expr Expr::star(Expr left, Expr right) { return binary(ExprKind::Star, std::move(left), std::move(right)); }

bool operator==(const Expr& a, const Expr& b) noexcept
{
    if (a.node_ == b.node_) return true;
    if (a.hash() != b.hash() || a.size() != b.size() || a.kind() != b.kind()) return false;
    switch (a.kind()) {
    case ExprKind::Action: return a.name() == b.name();
    case ExprKind::Zero: return true;
    default: return a.left() == b.left() && a.right() == b.right();
    }
}

std::strong_ordering operator<=>(const Expr& a, const Expr& b) noexcept
{
    if (a.node_ == b.node_) return std::strong_ordering::equal;
    if (auto c = rank(a.kind()) <=> rank(b.kind()); c != 0) return c;
    switch (a.kind()) {
    case ExprKind::Action: return a.name() <=> b.name();
    case ExprKind::Zero: return std::strong_ordering::equal;
    default:
        if (auto c = a.left() <=> b.left(); c != 0) return c;
        return a.right() <=> b.right();
    }
}

bool is_action_name(std::string_view name) noexcept
{
    if (name.empty() || name[0] < 'a' || name[0] > 'z') return false;
    for (char c : name) {
        bool ok = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
        if (!ok) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// parser

namespace {

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    Expr parse_all()
    {
        skip_ws();
        if (pos_ == text_.size()) throw SyntaxError("empty expression", pos_);
        Expr e = parse_sum();
        skip_ws();
        if (pos_ != text_.size()) {
            if (text_[pos_] == ')') throw SyntaxError("unbalanced ')'", pos_);
            throw SyntaxError(std::string("unexpected '") + text_[pos_] + "'", pos_);
        }
        return e;
    }

private:
    void skip_ws()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c)
    {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Expr parse_sum()
    {
        Expr e = parse_product();
        while (accept('+')) e = Expr::plus(std::move(e), parse_product());
        return e;
    }

    Expr parse_product()
    {
        Expr e = parse_star();
        while (accept('.')) e = Expr::seq(std::move(e), parse_star());
        return e;
    }

    Expr parse_star()
    {
        Expr e = parse_atom();
        if (accept('*')) {
            e = Expr::star(std::move(e), parse_atom());
            skip_ws();
            if (pos_ < text_.size() && text_[pos_] == '*')
                throw AssocError("chained '*' needs parentheses", pos_);
        }
        return e;
    }

    Expr parse_atom()
    {
        skip_ws();
        if (pos_ == text_.size()) throw SyntaxError("unexpected end of input", pos_);
        const std::size_t start = pos_;
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            Expr e = parse_sum();
            if (!accept(')')) throw SyntaxError("expected ')'", pos_);
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            auto tok = text_.substr(start, pos_ - start);
            if (tok == "0") return Expr::zero();
            if (tok == "1") throw SyntaxError("'1' is not a 1-free expression", start);
            throw SyntaxError("invalid token '" + std::string(tok) + "'", start);
        }
        if (c >= 'a' && c <= 'z') {
            while (pos_ < text_.size()) {
                char d = text_[pos_];
                if ((d >= 'a' && d <= 'z') || (d >= '0' && d <= '9') || d == '_') ++pos_;
                else break;
            }
            return Expr::action(std::string(text_.substr(start, pos_ - start)));
        }
        throw SyntaxError(std::string("unexpected '") + c + "'", start);
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

// Binding strength: larger binds tighter.
int strength(ExprKind k)
{
    switch (k) {
    case ExprKind::Plus: return 1;
    case ExprKind::Seq: return 2;
    case ExprKind::Star: return 3;
    default: return 4;
    }
}

void print_to(std::string& out, const Expr& e);

void print_operand(std::string& out, const Expr& e, bool parens)
{
    if (parens) out += '(';
    print_to(out, e);
    if (parens) out += ')';
}

void print_to(std::string& out, const Expr& e)
{
    switch (e.kind()) {
    case ExprKind::Action: out += e.name(); return;
    case ExprKind::Zero: out += '0'; return;
    case ExprKind::Plus:
    case ExprKind::Seq:
    case ExprKind::Star: break;
    }
    const int s = strength(e.kind());
    const char op = e.kind() == ExprKind::Plus ? '+' : e.kind() == ExprKind::Seq ? '.' : '*';
    // left operand may repeat a left-associative operator; star is non-associative
    const bool left_parens = e.kind() == ExprKind::Star ? strength(e.left().kind()) <= s
                                                        : strength(e.left().kind()) < s;
    print_operand(out, e.left(), left_parens);
    out += op;
    print_operand(out, e.right(), strength(e.right().kind()) <= s);
}

const char* tag_of(ExprKind k)
{
    switch (k) {
    case ExprKind::Action: return "action";
    case ExprKind::Zero: return "zero";
    case ExprKind::Plus: return "plus";
    case ExprKind::Seq: return "seq";
    case ExprKind::Star: return "star";
    }
    return "?";
}

} // namespace

Expr parse(std::string_view text)
{
    return Parser(text).parse_all();
}

std::string print(const Expr& e)
{
    std::string out;
    print_to(out, e);
    return out;
}

std::ostream& operator<<(std::ostream& os, const Expr& e)
{
    return os << print(e);
}

nlohmann::json to_json(const Expr& e)
{
    nlohmann::json j;
    j["tag"] = tag_of(e.kind());
    if (e.is_action()) j["name"] = e.name();
    else if (!e.is_zero()) {
        j["left"] = to_json(e.left());
        j["right"] = to_json(e.right());
    }
    return j;
}

Expr expr_from_json(const nlohmann::json& j)
{
    if (!j.is_object() || !j.contains("tag") || !j["tag"].is_string())
        throw FormatError("expression object without \"tag\"", 0);
    const auto tag = j["tag"].get<std::string>();
    if (tag == "zero") return Expr::zero();
    if (tag == "action") {
        auto name = j.value("name", std::string());
        if (!is_action_name(name)) throw FormatError("invalid action name '" + name + "'", 0);
        return Expr::action(std::move(name));
    }
    if (!j.contains("left") || !j.contains("right"))
        throw FormatError("binary expression \"" + tag + "\" needs left and right", 0);
    auto l = expr_from_json(j["left"]);
    auto r = expr_from_json(j["right"]);
    if (tag == "plus") return Expr::plus(std::move(l), std::move(r));
    if (tag == "seq") return Expr::seq(std::move(l), std::move(r));
    if (tag == "star") return Expr::star(std::move(l), std::move(r));
    throw FormatError("unknown expression tag \"" + tag + "\"", 0);
}

} // namespace lleekit
