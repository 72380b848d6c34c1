#pragma once

#include <complex>
#include <map>
#include <optional>
#include <vector>

#include "ck/graph.hpp"
#include "ck/numeric.hpp"

// Symbolic *-algebra of words in {p_v, s_e, s_e*} with rewriting to the
// s_mu s_nu* normal form.

namespace ck {

struct OperatorFamily;

struct Generator {
    enum Kind { Proj, Shift, ShiftAdj };
    Kind kind;
    int index;  // vertex index for Proj, edge index otherwise

    static Generator p(int v) { return {Proj, v}; }
    static Generator s(int e) { return {Shift, e}; }
    static Generator s_adj(int e) { return {ShiftAdj, e}; }
};

/// Normal-form monomial s_mu s_nu* with s(mu) = s(nu). p_v is (v, v),
/// s_e is (e, s(e)), s_e* is (s(e), e).
class Monomial {
  public:
    Monomial(const Graph& g, Path mu, Path nu);
    static Monomial proj(const Graph& g, int v);
    static Monomial shift(const Graph& g, int e);
    static Monomial shift_adj(const Graph& g, int e);

    const Path& mu() const { return mu_; }
    const Path& nu() const { return nu_; }
    int degree() const { return mu_.length() + nu_.length(); }

    Monomial adjoint(const Graph& g) const { return Monomial(g, nu_, mu_); }

    using Key = std::tuple<int, std::vector<int>, int, std::vector<int>>;
    Key key() const { return {mu_.source(), mu_.edges(), nu_.source(), nu_.edges()}; }

  private:
    Path mu_;
    Path nu_;
};

/// Finitely supported linear combination of normal-form monomials over one
/// graph. Coefficients below the relative purge threshold are dropped.
class AlgElement {
  public:
    explicit AlgElement(const Graph& g) : g_(&g) {}

    static constexpr double kPurgeRel = 1e-14;

    const Graph& graph() const { return *g_; }
    bool is_zero() const { return terms_.empty(); }
    int support_size() const { return static_cast<int>(terms_.size()); }
    const std::map<Monomial::Key, std::pair<Monomial, Complex>>& terms() const {
        return terms_;
    }

    void add_term(const Monomial& m, Complex c);
    void purge();

    AlgElement operator+(const AlgElement& o) const;
    AlgElement operator*(Complex c) const;

  private:
    const Graph* g_;
    std::map<Monomial::Key, std::pair<Monomial, Complex>> terms_;
};

/// Rewrites a word in the generators to its normal form. The result is a
/// single monomial or zero; rules are applied to a fixed point and each
/// application strictly shortens the word.
AlgElement normal_form(const Graph& g, const std::vector<Generator>& word);

/// Word reduction to a single monomial; nullopt when the word rewrites to 0.
std::optional<Monomial> reduce_word(const Graph& g, std::vector<Generator> word);

AlgElement multiply(const AlgElement& a, const AlgElement& b);
AlgElement adjoint(const AlgElement& a);

Matrix evaluate(const Monomial& m, const OperatorFamily& fam);
Matrix evaluate(const AlgElement& a, const OperatorFamily& fam);
/// Direct evaluation of an unreduced word (no rewriting).
Matrix evaluate_word(const Graph& g, const std::vector<Generator>& word,
                     const OperatorFamily& fam);

/// Element of the free product over the vertex algebra: a linear combination
/// of alternating words of (color, monomial) pairs. Adjacent same-color
/// entries are merged and interior vertex projections spliced into their
/// neighbors on construction.
class FreeElement {
  public:
    struct Word {
        Complex coeff;
        std::vector<std::pair<int, Monomial>> factors;
    };

    explicit FreeElement(const Graph& g) : g_(&g) {}
    void add_word(Complex coeff, std::vector<std::pair<int, Monomial>> factors);

    const Graph& graph() const { return *g_; }
    const std::vector<Word>& words() const { return words_; }

  private:
    const Graph* g_;
    std::vector<Word> words_;
};

Matrix evaluate(const FreeElement& f, const OperatorFamily& fam);

}  // namespace ck
