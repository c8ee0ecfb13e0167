#pragma once

#include <algorithm>
#include <vector>

#include "fvs/layout.hpp"

namespace fvs {

template <class T> struct StencilTerm {
  SiteRef site;
  T coef;
};

/// Linear functional Σ coef · u(site) on mesh functions of the infinite mesh,
/// kept sorted by site with merged duplicates.
template <class T> class Stencil {
 public:
  std::vector<StencilTerm<T>> terms;

  static Stencil unit(const SiteRef& s) {
    Stencil st;
    st.terms.push_back({s, T(1)});
    return st;
  }

  void add(const SiteRef& s, const T& c) {
    auto it = std::lower_bound(terms.begin(), terms.end(), s,
                               [](const StencilTerm<T>& t, const SiteRef& x) { return t.site < x; });
    if (it != terms.end() && it->site == s) it->coef += c;
    else terms.insert(it, {s, c});
  }

  void add_scaled(const Stencil& o, const T& c) {
    if (is_zero(c)) return;
    for (const auto& t : o.terms) add(t.site, t.coef * c);
  }

  Stencil shifted(const Shift& s) const {
    Stencil r = *this;
    for (auto& t : r.terms) t.site.shift = {t.site.shift[0] + s[0], t.site.shift[1] + s[1]};
    return r;
  }

  Stencil scaled(const T& c) const {
    Stencil r = *this;
    for (auto& t : r.terms) t.coef *= c;
    return r;
  }

  void prune() {
    terms.erase(std::remove_if(terms.begin(), terms.end(), [](const StencilTerm<T>& t) { return is_zero(t.coef); }),
                terms.end());
  }

  T sum() const {
    T s(0);
    for (const auto& t : terms) s += t.coef;
    return s;
  }

  std::size_t size() const { return terms.size(); }
};

}  // namespace fvs
