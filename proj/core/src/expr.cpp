#include "ck/expr.hpp"

#include <cctype>
#include <cstdlib>
#include <sstream>

namespace ck {

namespace {

AlgElement unit(const Graph& g) {
    AlgElement u(g);
    for (int v = 0; v < g.num_vertices(); ++v) u.add_term(Monomial::proj(g, v), 1.0);
    return u;
}

class Parser {
  public:
    Parser(const Graph& g, const std::string& text) : g_(g), text_(text) {}

    AlgElement parse() {
        AlgElement out = parse_sum();
        skip_ws();
        if (pos_ < text_.size())
            throw ParseError("unexpected character '" + std::string(1, text_[pos_]) + "'",
                             pos_);
        return out;
    }

  private:
    const Graph& g_;
    const std::string& text_;
    std::size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    bool starts_factor() {
        char c = peek();
        if (c == 'p' || c == 's' || c == '(' || c == 'i') return true;
        return std::isdigit(static_cast<unsigned char>(c)) || c == '.';
    }

    AlgElement parse_sum() {
        AlgElement out = parse_product();
        while (peek() == '+') {
            ++pos_;
            out = out + parse_product();
        }
        return out;
    }

    AlgElement parse_product() {
        if (!starts_factor())
            throw ParseError("expected p(...), s(...), s*(...), a scalar or '('", pos_);
        AlgElement out = parse_factor();
        while (starts_factor()) out = multiply(out, parse_factor());
        return out;
    }

    AlgElement parse_factor() {
        char c = peek();
        if (c == '(') {
            ++pos_;
            AlgElement inner = parse_sum();
            if (peek() != ')') throw ParseError("expected ')'", pos_);
            ++pos_;
            return inner;
        }
        if (c == 'p' || c == 's') return parse_generator();
        return parse_scalar();
    }

    AlgElement parse_generator() {
        std::size_t start = pos_;
        char kind = text_[pos_++];
        bool adj = false;
        if (kind == 's' && pos_ < text_.size() && text_[pos_] == '*') {
            adj = true;
            ++pos_;
        }
        skip_ws();
        if (pos_ >= text_.size() || text_[pos_] != '(')
            throw ParseError(std::string("expected '(' after '") + kind +
                                 (adj ? "*'" : "'"),
                             pos_);
        ++pos_;
        std::size_t id_start = pos_;
        while (pos_ < text_.size() && text_[pos_] != ')') ++pos_;
        if (pos_ >= text_.size()) throw ParseError("unterminated generator id", id_start);
        std::string id = text_.substr(id_start, pos_ - id_start);
        ++pos_;  // consume ')'
        // trim surrounding whitespace inside the parentheses
        std::size_t a = id.find_first_not_of(" \t");
        std::size_t b = id.find_last_not_of(" \t");
        id = a == std::string::npos ? "" : id.substr(a, b - a + 1);
        if (id.empty()) throw ParseError("empty generator id", id_start);

        AlgElement out(g_);
        if (kind == 'p') {
            auto v = g_.vertex_index(id);
            if (!v) throw ParseError("unknown vertex id '" + id + "'", id_start);
            out.add_term(Monomial::proj(g_, *v), 1.0);
        } else {
            auto e = g_.edge_index(id);
            if (!e) throw ParseError("unknown edge id '" + id + "'", id_start);
            out.add_term(adj ? Monomial::shift_adj(g_, *e) : Monomial::shift(g_, *e),
                         1.0);
        }
        (void)start;
        return out;
    }

    AlgElement parse_scalar() {
        skip_ws();
        std::size_t start = pos_;
        if (text_[pos_] == 'i') {
            ++pos_;
            return unit(g_) * Complex(0.0, 1.0);
        }
        const char* begin = text_.c_str() + pos_;
        char* end = nullptr;
        double value = std::strtod(begin, &end);
        if (end == begin) throw ParseError("expected a number", start);
        pos_ += static_cast<std::size_t>(end - begin);
        bool imag = pos_ < text_.size() && text_[pos_] == 'i';
        if (imag) ++pos_;
        return unit(g_) * (imag ? Complex(0.0, value) : Complex(value, 0.0));
    }
};

std::string format_scalar(Complex c) {
    std::ostringstream os;
    os.precision(12);
    if (c.imag() == 0.0) {
        os << c.real();
    } else if (c.real() == 0.0) {
        os << c.imag() << "i";
    } else {
        os << "(" << c.real() << (c.imag() < 0 ? "" : "+") << c.imag() << "i)";
    }
    return os.str();
}

}  // namespace

AlgElement parse_expression(const Graph& g, const std::string& text) {
    return Parser(g, text).parse();
}

std::string to_text(const Graph& g, const Monomial& m) {
    if (m.degree() == 0) return "p(" + g.vertex_id(m.mu().source()) + ")";
    std::ostringstream os;
    const auto& mu = m.mu().edges();
    for (auto it = mu.rbegin(); it != mu.rend(); ++it)
        os << "s(" << g.edge(*it).id << ")";
    for (int e : m.nu().edges()) os << "s*(" << g.edge(e).id << ")";
    return os.str();
}

std::string to_text(const AlgElement& a) {
    if (a.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [key, term] : a.terms()) {
        const auto& [mono, coeff] = term;
        if (!first) os << " + ";
        first = false;
        if (coeff == Complex(1.0, 0.0)) {
            os << to_text(a.graph(), mono);
        } else {
            os << format_scalar(coeff) << " " << to_text(a.graph(), mono);
        }
    }
    return os.str();
}

}  // namespace ck
