#include "kitaoka/element_io.hpp"

#include <cctype>

namespace kitaoka {

namespace {

class Parser {
public:
    explicit Parser(std::string_view s) : s_(s) {}

    std::vector<mpq_class> expr()
    {
        std::vector<mpq_class> acc;
        skip();
        int sign = 1;
        if (peek() == '+' || peek() == '-') sign = take() == '-' ? -1 : 1;
        term(sign, acc);
        for (skip(); pos_ < s_.size(); skip()) {
            char op = take();
            if (op != '+' && op != '-') error("expected '+' or '-'");
            term(op == '-' ? -1 : 1, acc);
        }
        return acc;
    }

private:
    void term(int sign, std::vector<mpq_class>& acc)
    {
        skip();
        mpq_class coef = sign;
        unsigned long power = 0;
        if (peek() == 't') {
            power = monomial();
        } else {
            coef *= rational();
            skip();
            if (peek() == '*') {
                take();
                skip();
                if (peek() != 't') error("expected 't' after '*'");
                power = monomial();
            }
        }
        if (acc.size() <= power) acc.resize(power + 1);
        acc[power] += coef;
    }

    unsigned long monomial()
    {
        take(); // 't'
        skip();
        if (peek() != '^') return 1;
        take();
        skip();
        mpz_class e = natural();
        if (e > 4096) error("exponent too large");
        return e.get_ui();
    }

    mpq_class rational()
    {
        mpz_class num = natural();
        skip();
        if (peek() != '/') return mpq_class(num);
        take();
        skip();
        mpz_class den = natural();
        if (den == 0) error("zero denominator");
        mpq_class q(num, den);
        q.canonicalize();
        return q;
    }

    mpz_class natural()
    {
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (start == pos_) error("expected a number");
        return mpz_class(std::string(s_.substr(start, pos_ - start)));
    }

    void skip()
    {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
    char take() { return s_[pos_++]; }

    [[noreturn]] void error(const std::string& msg) const
    {
        fail(Errc::SyntaxError, msg + " at position " + std::to_string(pos_) + " in \"" + std::string(s_) + "\"");
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

std::string format_power(const std::vector<mpq_class>& p)
{
    std::string out;
    for (int k = static_cast<int>(p.size()) - 1; k >= 0; --k) {
        const mpq_class& c = p[k];
        if (c == 0) continue;
        mpq_class a = abs(c);
        if (c < 0)
            out += "-";
        else if (!out.empty())
            out += "+";
        if (k == 0) {
            out += a.get_str();
            continue;
        }
        if (a != 1) out += a.get_str() + "*";
        out += "t";
        if (k > 1) out += "^" + std::to_string(k);
    }
    return out.empty() ? "0" : out;
}

} // namespace

ElemQ parse_elem_q(const Field& f, std::string_view s) { return f.from_power_basis(Parser(s).expr()); }

Elem parse_elem(const Field& f, std::string_view s)
{
    ElemQ q = parse_elem_q(f, s);
    if (!q.is_integral()) fail(Errc::NotIntegral, "\"" + std::string(s) + "\" is not an algebraic integer");
    return q.to_elem();
}

std::string format_elem(const ElemQ& a) { return format_power(a.field().to_power_basis(a.coords())); }

std::string format_elem(const Elem& a) { return format_power(a.field().to_power_basis(a)); }

} // namespace kitaoka
