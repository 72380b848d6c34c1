#include "ck/staralg.hpp"

#include <stdexcept>

#include "ck/family.hpp"

namespace ck {

Monomial::Monomial(const Graph& g, Path mu, Path nu) : mu_(std::move(mu)), nu_(std::move(nu)) {
    (void)g;
    if (mu_.source() != nu_.source())
        throw std::invalid_argument("monomial requires s(mu) = s(nu)");
}

Monomial Monomial::proj(const Graph& g, int v) {
    return Monomial(g, Path::at_vertex(g, v), Path::at_vertex(g, v));
}

Monomial Monomial::shift(const Graph& g, int e) {
    return Monomial(g, Path::of_edge(g, e), Path::at_vertex(g, g.edge(e).src));
}

Monomial Monomial::shift_adj(const Graph& g, int e) {
    return Monomial(g, Path::at_vertex(g, g.edge(e).src), Path::of_edge(g, e));
}

void AlgElement::add_term(const Monomial& m, Complex c) {
    auto it = terms_.find(m.key());
    if (it == terms_.end()) {
        if (c != Complex(0, 0)) terms_.emplace(m.key(), std::make_pair(m, c));
    } else {
        it->second.second += c;
        if (std::abs(it->second.second) == 0.0) terms_.erase(it);
    }
}

void AlgElement::purge() {
    double maxmag = 0.0;
    for (const auto& [k, t] : terms_) maxmag = std::max(maxmag, std::abs(t.second));
    for (auto it = terms_.begin(); it != terms_.end();) {
        if (std::abs(it->second.second) <= kPurgeRel * maxmag)
            it = terms_.erase(it);
        else
            ++it;
    }
}

AlgElement AlgElement::operator+(const AlgElement& o) const {
    if (g_ != o.g_ && !g_->same_structure(*o.g_))
        throw std::invalid_argument("graph mismatch in element sum");
    AlgElement out = *this;
    for (const auto& [k, t] : o.terms_) out.add_term(t.first, t.second);
    out.purge();
    return out;
}

AlgElement AlgElement::operator*(Complex c) const {
    AlgElement out(*g_);
    for (const auto& [k, t] : terms_) out.add_term(t.first, t.second * c);
    out.purge();
    return out;
}

// ---------------------------------------------------------------------------

namespace {

// Applies one reducing rewrite to the adjacent pair (a, b) = product a*b.
// Returns: 0 = no rule applies, 1 = replace pair by `out`, 2 = whole word is
// zero, 3 = drop the pair entirely (never happens; reserved).
int pair_rule(const Graph& g, const Generator& a, const Generator& b, Generator& out) {
    using K = Generator::Kind;
    switch (a.kind) {
        case K::Proj:
            if (b.kind == K::Proj)
                return a.index == b.index ? (out = a, 1) : 2;
            if (b.kind == K::Shift)  // p_v s_e
                return g.edge(b.index).dst == a.index ? (out = b, 1) : 2;
            // p_v s_e*
            return g.edge(b.index).src == a.index ? (out = b, 1) : 2;
        case K::Shift:
            if (b.kind == K::Proj)  // s_e p_v
                return g.edge(a.index).src == b.index ? (out = a, 1) : 2;
            if (b.kind == K::Shift)  // s_e s_f: zero unless chaining
                return g.edge(a.index).src == g.edge(b.index).dst ? 0 : 2;
            // s_e s_f*: zero unless common source
            return g.edge(a.index).src == g.edge(b.index).src ? 0 : 2;
        case K::ShiftAdj:
            if (b.kind == K::Proj)  // s_e* p_v
                return g.edge(a.index).dst == b.index ? (out = a, 1) : 2;
            if (b.kind == K::Shift) {  // s_e* s_f
                if (a.index == b.index) {
                    out = Generator::p(g.edge(a.index).src);
                    return 1;
                }
                return 2;  // distinct ranges are orthogonal under (TCK)
            }
            // s_e* s_f*: adjoint chaining
            return g.edge(b.index).src == g.edge(a.index).dst ? 0 : 2;
    }
    return 0;
}

}  // namespace

std::optional<Monomial> reduce_word(const Graph& g, std::vector<Generator> word) {
    if (word.empty()) throw std::invalid_argument("empty word");
    for (const Generator& gen : word) {
        int n = gen.kind == Generator::Proj ? g.num_vertices() : g.num_edges();
        if (gen.index < 0 || gen.index >= n)
            throw std::invalid_argument("unknown generator id in word");
    }
    bool changed = true;
    while (changed && word.size() > 1) {
        changed = false;
        for (std::size_t i = 0; i + 1 < word.size(); ++i) {
            Generator out = word[i];
            int r = pair_rule(g, word[i], word[i + 1], out);
            if (r == 1) {
                word[i] = out;
                word.erase(word.begin() + static_cast<long>(i) + 1);
                changed = true;
                break;
            }
            if (r == 2) return std::nullopt;
        }
    }

    // remaining word: single projection, or S-run followed by S*-run
    if (word.size() == 1 && word[0].kind == Generator::Proj) {
        return Monomial::proj(g, word[0].index);
    }
    std::size_t split = 0;
    while (split < word.size() && word[split].kind == Generator::Shift) ++split;
    for (std::size_t i = split; i < word.size(); ++i) {
        if (word[i].kind != Generator::ShiftAdj)
            throw std::logic_error("word not in terminal S / S* shape after rewriting");
    }
    std::vector<int> mu_edges, nu_edges;
    for (std::size_t i = 0; i < split; ++i) mu_edges.push_back(word[split - 1 - i].index);
    for (std::size_t i = split; i < word.size(); ++i) nu_edges.push_back(word[i].index);

    Path mu = mu_edges.empty()
                  ? Path::at_vertex(g, g.edge(nu_edges.front()).src)
                  : Path(g, mu_edges);
    Path nu = nu_edges.empty()
                  ? Path::at_vertex(g, mu.source())
                  : Path(g, nu_edges);
    return Monomial(g, std::move(mu), std::move(nu));
}

AlgElement normal_form(const Graph& g, const std::vector<Generator>& word) {
    AlgElement out(g);
    auto m = reduce_word(g, word);
    if (m) out.add_term(*m, Complex(1, 0));
    return out;
}

namespace {

std::vector<Generator> monomial_word(const Graph& g, const Monomial& m) {
    std::vector<Generator> w;
    const auto& mu = m.mu().edges();
    const auto& nu = m.nu().edges();
    if (mu.empty() && nu.empty()) {
        w.push_back(Generator::p(m.mu().source()));
        return w;
    }
    for (auto it = mu.rbegin(); it != mu.rend(); ++it) w.push_back(Generator::s(*it));
    for (int e : nu) w.push_back(Generator::s_adj(e));
    return w;
}

}  // namespace

AlgElement multiply(const AlgElement& a, const AlgElement& b) {
    if (&a.graph() != &b.graph() && !a.graph().same_structure(b.graph()))
        throw std::invalid_argument("graph mismatch in element product");
    const Graph& g = a.graph();
    AlgElement out(g);
    for (const auto& [ka, ta] : a.terms()) {
        for (const auto& [kb, tb] : b.terms()) {
            std::vector<Generator> w = monomial_word(g, ta.first);
            std::vector<Generator> wb = monomial_word(g, tb.first);
            w.insert(w.end(), wb.begin(), wb.end());
            auto m = reduce_word(g, std::move(w));
            if (m) out.add_term(*m, ta.second * tb.second);
        }
    }
    out.purge();
    return out;
}

AlgElement adjoint(const AlgElement& a) {
    AlgElement out(a.graph());
    for (const auto& [k, t] : a.terms())
        out.add_term(t.first.adjoint(a.graph()), std::conj(t.second));
    return out;
}

// ---------------------------------------------------------------------------

Matrix evaluate(const Monomial& m, const OperatorFamily& fam) {
    Matrix acc = fam.P.at(m.mu().source());
    for (int e : m.mu().edges()) acc = fam.S.at(e) * acc;
    Matrix nu_part = fam.P.at(m.nu().source());
    for (int e : m.nu().edges()) nu_part = fam.S.at(e) * nu_part;
    return acc * nu_part.adjoint();
}

Matrix evaluate(const AlgElement& a, const OperatorFamily& fam) {
    fam.require_graph(a.graph());
    Matrix out = Matrix::Zero(fam.dimension, fam.dimension);
    for (const auto& [k, t] : a.terms()) out += t.second * evaluate(t.first, fam);
    return out;
}

Matrix evaluate_word(const Graph& g, const std::vector<Generator>& word,
                     const OperatorFamily& fam) {
    fam.require_graph(g);
    Matrix out = Matrix::Identity(fam.dimension, fam.dimension);
    for (const Generator& gen : word) {
        switch (gen.kind) {
            case Generator::Proj: out = out * fam.P.at(gen.index); break;
            case Generator::Shift: out = out * fam.S.at(gen.index); break;
            case Generator::ShiftAdj: out = out * fam.S.at(gen.index).adjoint(); break;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------

void FreeElement::add_word(Complex coeff, std::vector<std::pair<int, Monomial>> factors) {
    const Graph& g = *g_;
    // splice interior vertex projections, then merge same-color neighbours
    bool changed = true;
    while (changed && factors.size() > 1) {
        changed = false;
        for (std::size_t i = 0; i < factors.size(); ++i) {
            bool is_proj = factors[i].second.mu().length() == 0 &&
                           factors[i].second.nu().length() == 0;
            if (is_proj && factors.size() > 1) {
                std::size_t j = i + 1 < factors.size() ? i + 1 : i - 1;
                AlgElement lhs(g), rhs(g);
                if (j > i) {
                    lhs.add_term(factors[i].second, Complex(1, 0));
                    rhs.add_term(factors[j].second, Complex(1, 0));
                } else {
                    lhs.add_term(factors[j].second, Complex(1, 0));
                    rhs.add_term(factors[i].second, Complex(1, 0));
                }
                AlgElement prod = multiply(lhs, rhs);
                if (prod.is_zero()) return;  // whole word vanishes
                factors[j] = {factors[j].first, prod.terms().begin()->second.first};
                factors.erase(factors.begin() + static_cast<long>(i));
                changed = true;
                break;
            }
            if (i + 1 < factors.size() && factors[i].first == factors[i + 1].first) {
                AlgElement lhs(g), rhs(g);
                lhs.add_term(factors[i].second, Complex(1, 0));
                rhs.add_term(factors[i + 1].second, Complex(1, 0));
                AlgElement prod = multiply(lhs, rhs);
                if (prod.is_zero()) return;
                factors[i] = {factors[i].first, prod.terms().begin()->second.first};
                factors.erase(factors.begin() + static_cast<long>(i) + 1);
                changed = true;
                break;
            }
        }
    }
    words_.push_back(Word{coeff, std::move(factors)});
}

Matrix evaluate(const FreeElement& f, const OperatorFamily& fam) {
    fam.require_graph(f.graph());
    Matrix out = Matrix::Zero(fam.dimension, fam.dimension);
    for (const auto& w : f.words()) {
        Matrix acc = Matrix::Identity(fam.dimension, fam.dimension);
        for (const auto& [color, m] : w.factors) acc = acc * evaluate(m, fam);
        out += w.coeff * acc;
    }
    return out;
}

}  // namespace ck
