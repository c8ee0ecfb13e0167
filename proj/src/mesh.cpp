#include "fvs/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "json.hpp"

namespace fvs {

namespace {

int to_int(const Rational& r) {
  if (r.get_den() != 1) throw std::logic_error("expected an integer lattice shift");
  return static_cast<int>(r.get_num().get_si());
}

Rational floor_div(const Rational& a, const Rational& b) {
  Rational q = a / b;
  mpz_class f;
  mpz_fdiv_q(f.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return Rational(f);
}

void refresh_doubles(PeriodicMesh& m) {
  m.period = {m.period_exact[0].get_d(), m.period_exact[1].get_d()};
  m.nodes.resize(m.nodes_exact.size());
  for (std::size_t i = 0; i < m.nodes_exact.size(); ++i)
    m.nodes[i] = {m.nodes_exact[i][0].get_d(), m.nodes_exact[i][1].get_d()};
}

void identity_provenance(PeriodicMesh& m) {
  m.copies = 1;
  m.node_class.resize(m.nodes_exact.size());
  std::iota(m.node_class.begin(), m.node_class.end(), 0);
  m.element_class.resize(m.elements.size());
  std::iota(m.element_class.begin(), m.element_class.end(), 0);
}

// Chooses the lattice shift of an element so that its centroid lies in the
// fundamental cell [0, period).
void normalize_element_shift(const PeriodicMesh& m, Element& e) {
  const int nv = m.dim + 1;
  for (int a = 0; a < m.dim; ++a) {
    Rational c = 0;
    for (int i = 0; i < nv; ++i) c += m.nodes_exact[e.v[i].node][a] + e.v[i].shift[a] * m.period_exact[a];
    c /= nv;
    const int q = to_int(floor_div(c, m.period_exact[a]));
    for (int i = 0; i < nv; ++i) e.v[i].shift[a] -= q;
  }
}

}  // namespace

int PeriodicMesh::pattern_node_count() const {
  int c = 1;
  for (int a = 0; a < dim; ++a) c *= copies;
  return node_count() / c;
}

int PeriodicMesh::pattern_element_count() const {
  int c = 1;
  for (int a = 0; a < dim; ++a) c *= copies;
  return element_count() / c;
}

template <> Vec2<Rational> PeriodicMesh::position<Rational>(int node, const Shift& s) const {
  const auto& p = nodes_exact[node];
  return {p[0] + s[0] * period_exact[0], p[1] + s[1] * period_exact[1]};
}

template <> Vec2<double> PeriodicMesh::position<double>(int node, const Shift& s) const {
  const auto& p = nodes[node];
  return {p[0] + s[0] * period[0], p[1] + s[1] * period[1]};
}

template <> Vec2<Rational> PeriodicMesh::period_as<Rational>() const { return period_exact; }
template <> Vec2<double> PeriodicMesh::period_as<double>() const { return period; }

template <class T> T PeriodicMesh::measure(int element) const {
  const Element& e = elements[element];
  const Vec2<T> a = position<T>(e.v[0].node, e.v[0].shift);
  const Vec2<T> b = position<T>(e.v[1].node, e.v[1].shift);
  if (dim == 1) return T(b[0] - a[0]);
  const Vec2<T> c = position<T>(e.v[2].node, e.v[2].shift);
  return T(cross(b - a, c - a) / 2);
}

template double PeriodicMesh::measure<double>(int) const;
template Rational PeriodicMesh::measure<Rational>(int) const;

namespace {

template <class F> void for_each_edge(const PeriodicMesh& m, F&& f) {
  const int nv = m.vertices_per_element();
  for (const Element& e : m.elements)
    for (int i = 0; i < nv; ++i)
      for (int j = i + 1; j < nv; ++j) f(e.v[i], e.v[j]);
}

}  // namespace

double PeriodicMesh::longest_edge() const {
  double best = 0.0;
  for_each_edge(*this, [&](const VertexRef& a, const VertexRef& b) {
    best = std::max(best, norm(position<double>(b.node, b.shift) - position<double>(a.node, a.shift)));
  });
  return best;
}

double PeriodicMesh::shortest_edge() const {
  double best = std::numeric_limits<double>::infinity();
  for_each_edge(*this, [&](const VertexRef& a, const VertexRef& b) {
    best = std::min(best, norm(position<double>(b.node, b.shift) - position<double>(a.node, a.shift)));
  });
  return best;
}

PeriodicMesh build_1d_pattern_exact(const std::vector<Rational>& steps) {
  if (steps.empty()) throw std::invalid_argument("build_1d_pattern: empty step list");
  PeriodicMesh m;
  m.dim = 1;
  Rational x = 0;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (sgn(steps[i]) <= 0)
      throw std::invalid_argument("build_1d_pattern: step " + std::to_string(i) + " is not positive");
    m.nodes_exact.push_back({x, Rational(0)});
    x += steps[i];
  }
  m.period_exact = {x, Rational(1)};
  const int n = static_cast<int>(steps.size());
  for (int i = 0; i < n; ++i) {
    Element e;
    e.v[0] = {i, {0, 0}};
    e.v[1] = (i + 1 < n) ? VertexRef{i + 1, {0, 0}} : VertexRef{0, {1, 0}};
    m.elements.push_back(e);
  }
  refresh_doubles(m);
  identity_provenance(m);
  return m;
}

std::vector<Rational> random_1d_steps(std::uint64_t seed, int count) {
  if (count < 1) throw std::invalid_argument("random_1d_steps: count must be positive");
  Rng rng(seed);
  std::vector<Rational> steps;
  Rational total = 0;
  for (int i = 0; i < count; ++i) {
    Rational step(rng.integer(50, 150), 100);
    step.canonicalize();
    steps.push_back(step);
    total += step;
  }
  for (auto& s : steps) s /= total;
  return steps;
}

PeriodicMesh build_1d_pattern(const std::vector<double>& steps) {
  std::vector<Rational> exact;
  for (double s : steps) {
    if (!(s > 0.0)) throw std::invalid_argument("build_1d_pattern: non-positive step " + std::to_string(s));
    exact.push_back(nice_rational(s));
  }
  return build_1d_pattern_exact(exact);
}

PeriodicMesh build_ti_triangular_exact(const Vec2<Rational>& e1, const Vec2<Rational>& e2, std::array<int, 2> counts) {
  if (counts[0] < 1 || counts[1] < 1) throw std::invalid_argument("build_ti_triangular: counts must be >= 1");
  if (sgn(e1[1]) != 0 || sgn(e1[0]) <= 0)
    throw std::invalid_argument("build_ti_triangular: e1 must be (a, 0) with a > 0");
  if (sgn(cross(e1, e2)) == 0) throw std::invalid_argument("build_ti_triangular: e1 and e2 are parallel");
  const int n1 = counts[0], n2 = counts[1];
  const Rational wrap_shift = n2 * e2[0] / e1[0];
  if (wrap_shift.get_den() != 1) {
    std::ostringstream msg;
    msg << "build_ti_triangular: counts[1]*e2.x = " << Rational(n2 * e2[0]).get_d()
        << " is not a multiple of e1.x; residual " << Rational(wrap_shift - floor_div(wrap_shift, Rational(1))).get_d()
        << " lattice steps";
    throw std::invalid_argument(msg.str());
  }
  const long m = wrap_shift.get_num().get_si();
  const Vec2<Rational> period{n1 * e1[0], abs(n2 * e2[1])};

  PeriodicMesh mesh;
  mesh.dim = 2;
  mesh.period_exact = period;
  auto fundamental = [&](int i, int j) {
    Vec2<Rational> p{i * e1[0] + j * e2[0], j * e2[1]};
    for (int a = 0; a < 2; ++a) p[a] -= floor_div(p[a], period[a]) * period[a];
    return p;
  };
  for (int j = 0; j < n2; ++j)
    for (int i = 0; i < n1; ++i) mesh.nodes_exact.push_back(fundamental(i, j));

  auto vertex = [&](long ip, long jp) {
    long q = jp >= 0 ? jp / n2 : -((-jp + n2 - 1) / n2);
    long j0 = jp - q * n2;
    long i1 = ip + q * m;
    long i0 = ((i1 % n1) + n1) % n1;
    const int node = static_cast<int>(j0 * n1 + i0);
    Vec2<Rational> unwrapped{ip * e1[0] + jp * e2[0], jp * e2[1]};
    const Vec2<Rational>& f = mesh.nodes_exact[node];
    VertexRef v;
    v.node = node;
    v.shift = {to_int((unwrapped[0] - f[0]) / period[0]), to_int((unwrapped[1] - f[1]) / period[1])};
    return v;
  };
  const bool flip = sgn(cross(e1, e2)) < 0;
  for (int j = 0; j < n2; ++j)
    for (int i = 0; i < n1; ++i) {
      Element t1, t2;
      t1.v = {vertex(i, j), vertex(i + 1, j), vertex(i, j + 1)};
      t2.v = {vertex(i + 1, j), vertex(i + 1, j + 1), vertex(i, j + 1)};
      for (Element* t : {&t1, &t2}) {
        if (flip) std::swap(t->v[1], t->v[2]);
        normalize_element_shift(mesh, *t);
        mesh.elements.push_back(*t);
      }
    }
  refresh_doubles(mesh);
  identity_provenance(mesh);
  return mesh;
}

PeriodicMesh build_ti_triangular(const Vec2<double>& e1, const Vec2<double>& e2, std::array<int, 2> counts) {
  return build_ti_triangular_exact({nice_rational(e1[0]), nice_rational(e1[1])},
                                   {nice_rational(e2[0]), nice_rational(e2[1])}, counts);
}

namespace {

bool all_positive(const PeriodicMesh& m) {
  for (int e = 0; e < m.element_count(); ++e)
    if (sgn(m.measure<Rational>(e)) <= 0) return false;
  return true;
}

}  // namespace

PeriodicMesh perturb_nodes(const PeriodicMesh& mesh, double amplitude, std::uint64_t seed) {
  if (!(amplitude >= 0.0 && amplitude <= 0.3))
    throw std::invalid_argument("perturb_nodes: amplitude must lie in [0, 0.3]");
  if (amplitude == 0.0) return mesh;
  const double ell = mesh.shortest_edge();
  const Rational grid = Rational(1, 1) / Rational(mpz_class(1) << 40);
  double amp = amplitude;
  for (int attempt = 0; attempt <= 5; ++attempt, amp *= 0.5) {
    Rng rng(seed);
    PeriodicMesh out = mesh;
    for (auto& p : out.nodes_exact)
      for (int a = 0; a < mesh.dim; ++a) {
        const double delta = rng.uniform(-1.0, 1.0) * amp * ell;
        const auto ticks = static_cast<long>(std::llround(std::ldexp(delta, 40)));
        p[a] += Rational(ticks) * grid;
      }
    refresh_doubles(out);
    identity_provenance(out);
    if (all_positive(out)) return out;
  }
  throw std::runtime_error("perturb_nodes: inverted elements persist after 5 amplitude halvings");
}

PeriodicMesh replicate_scale(const PeriodicMesh& mesh, int copies) {
  if (copies < 1) throw std::invalid_argument("replicate_scale: copies must be >= 1");
  if (copies == 1) return mesh;
  const int d = mesh.dim;
  const int ncopy = d == 1 ? copies : copies * copies;
  const int nn = mesh.node_count();
  PeriodicMesh out;
  out.dim = d;
  out.period_exact = mesh.period_exact;
  out.copies = mesh.copies * copies;
  auto copy_index = [&](int cx, int cy) { return cy * copies + cx; };
  for (int c = 0; c < ncopy; ++c) {
    const int cx = c % copies, cy = c / copies;
    for (int n = 0; n < nn; ++n) {
      const auto& p = mesh.nodes_exact[n];
      Vec2<Rational> q{(p[0] + cx * mesh.period_exact[0]) / copies, p[1]};
      if (d == 2) q[1] = (p[1] + cy * mesh.period_exact[1]) / copies;
      out.nodes_exact.push_back(q);
      out.node_class.push_back(mesh.node_class.empty() ? n : mesh.node_class[n]);
    }
  }
  auto floor_div_int = [](int a, int b) { return a >= 0 ? a / b : -((-a + b - 1) / b); };
  const int nv = mesh.vertices_per_element();
  for (int c = 0; c < ncopy; ++c) {
    const int cx = c % copies, cy = c / copies;
    for (int e = 0; e < mesh.element_count(); ++e) {
      Element ne;
      for (int i = 0; i < nv; ++i) {
        const VertexRef& v = mesh.elements[e].v[i];
        const int tx = cx + v.shift[0];
        const int ty = d == 2 ? cy + v.shift[1] : 0;
        const int qx = floor_div_int(tx, copies), qy = floor_div_int(ty, copies);
        const int ci = copy_index(tx - qx * copies, ty - qy * copies);
        ne.v[i] = {ci * nn + v.node, {qx, qy}};
      }
      normalize_element_shift(out, ne);
      out.elements.push_back(ne);
      out.element_class.push_back(mesh.element_class.empty() ? e : mesh.element_class[e]);
    }
  }
  refresh_doubles(out);
  return out;
}

PeriodicMesh translate_mesh(const PeriodicMesh& mesh, const Vec2<Rational>& offset) {
  PeriodicMesh out = mesh;
  std::vector<Shift> wrap(mesh.nodes_exact.size(), Shift{0, 0});
  for (std::size_t n = 0; n < out.nodes_exact.size(); ++n)
    for (int a = 0; a < mesh.dim; ++a) {
      Rational x = out.nodes_exact[n][a] + offset[a];
      Rational q = floor_div(x, mesh.period_exact[a]);
      out.nodes_exact[n][a] = x - q * mesh.period_exact[a];
      wrap[n][a] = to_int(q);
    }
  for (Element& e : out.elements) {
    for (int i = 0; i < mesh.vertices_per_element(); ++i) {
      e.v[i].shift[0] += wrap[e.v[i].node][0];
      e.v[i].shift[1] += wrap[e.v[i].node][1];
    }
    normalize_element_shift(out, e);
  }
  refresh_doubles(out);
  return out;
}

void validate_mesh(const PeriodicMesh& m) {
  if (m.dim != 1 && m.dim != 2) throw std::runtime_error("mesh: dimension must be 1 or 2");
  if (m.nodes_exact.size() != m.nodes.size()) throw std::runtime_error("mesh: exact/double node tables differ in size");
  const int nn = m.node_count();
  const int nv = m.vertices_per_element();
  Rational total = 0;
  for (int e = 0; e < m.element_count(); ++e) {
    for (int i = 0; i < nv; ++i)
      if (m.elements[e].v[i].node < 0 || m.elements[e].v[i].node >= nn)
        throw std::runtime_error("mesh: element " + std::to_string(e) + " references a missing node");
    const Rational meas = m.measure<Rational>(e);
    if (sgn(meas) <= 0) throw std::runtime_error("mesh: element " + std::to_string(e) + " has non-positive measure");
    total += meas;
  }
  const Rational volume = m.dim == 1 ? m.period_exact[0] : m.period_exact[0] * m.period_exact[1];
  if (total != volume) throw std::runtime_error("mesh: element measures do not sum to the period volume");
  if (m.dim == 1) {
    std::vector<int> left(nn, 0), right(nn, 0);
    for (const Element& e : m.elements) {
      ++left[e.v[0].node];
      ++right[e.v[1].node];
    }
    for (int n = 0; n < nn; ++n)
      if (left[n] != 1 || right[n] != 1) throw std::runtime_error("mesh: node " + std::to_string(n) + " is not shared by exactly two segments");
  } else {
    std::map<std::tuple<int, int, int, int>, int> count;
    for (const Element& e : m.elements)
      for (int i = 0; i < 3; ++i) {
        VertexRef a = e.v[i], b = e.v[(i + 1) % 3];
        Shift dlt{b.shift[0] - a.shift[0], b.shift[1] - a.shift[1]};
        if (a.node > b.node || (a.node == b.node && (dlt[0] < 0 || (dlt[0] == 0 && dlt[1] < 0)))) {
          std::swap(a, b);
          dlt = {-dlt[0], -dlt[1]};
        }
        ++count[{a.node, b.node, dlt[0], dlt[1]}];
      }
    for (const auto& [key, c] : count)
      if (c != 2)
        throw std::runtime_error("mesh: edge between nodes " + std::to_string(std::get<0>(key)) + " and " +
                                 std::to_string(std::get<1>(key)) + " is shared by " + std::to_string(c) + " triangles");
  }
  if (m.node_class.size() != m.nodes.size() || m.element_class.size() != m.elements.size())
    throw std::runtime_error("mesh: provenance tables have the wrong size");
}

std::string mesh_to_json(const PeriodicMesh& m) {
  using nlohmann::json;
  json j;
  j["dimension"] = m.dim;
  j["period"] = m.dim == 1 ? json::array({m.period[0]}) : json::array({m.period[0], m.period[1]});
  json nodes = json::array(), exact_nodes = json::array();
  for (int n = 0; n < m.node_count(); ++n) {
    if (m.dim == 1) {
      nodes.push_back(json::array({m.nodes[n][0]}));
      exact_nodes.push_back(json::array({rational_string(m.nodes_exact[n][0])}));
    } else {
      nodes.push_back(json::array({m.nodes[n][0], m.nodes[n][1]}));
      exact_nodes.push_back(json::array({rational_string(m.nodes_exact[n][0]), rational_string(m.nodes_exact[n][1])}));
    }
  }
  j["nodes"] = nodes;
  json elements = json::array();
  for (const Element& e : m.elements) {
    json verts = json::array();
    for (int i = 0; i < m.vertices_per_element(); ++i) {
      if (m.dim == 1)
        verts.push_back(json::array({e.v[i].node, e.v[i].shift[0]}));
      else
        verts.push_back(json::array({e.v[i].node, e.v[i].shift[0], e.v[i].shift[1]}));
    }
    elements.push_back(verts);
  }
  j["elements"] = elements;
  json exact;
  exact["period"] = m.dim == 1 ? json::array({rational_string(m.period_exact[0])})
                               : json::array({rational_string(m.period_exact[0]), rational_string(m.period_exact[1])});
  exact["nodes"] = exact_nodes;
  j["exact"] = exact;
  j["pattern"] = {{"copies", m.copies}, {"node_class", m.node_class}, {"element_class", m.element_class}};
  return j.dump(1) + "\n";
}

PeriodicMesh mesh_from_json(const std::string& text) {
  using nlohmann::json;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(std::string("mesh JSON: ") + e.what());
  }
  auto require = [&](const char* key) -> const json& {
    if (!j.contains(key)) throw std::runtime_error(std::string("mesh JSON: missing field '") + key + "'");
    return j.at(key);
  };
  PeriodicMesh m;
  m.dim = require("dimension").get<int>();
  if (m.dim != 1 && m.dim != 2) throw std::runtime_error("mesh JSON: dimension must be 1 or 2");
  const json& period = require("period");
  const json& nodes = require("nodes");
  const json& elements = require("elements");
  if (static_cast<int>(period.size()) != m.dim) throw std::runtime_error("mesh JSON: period has wrong length");
  const bool has_exact = j.contains("exact");
  for (int a = 0; a < m.dim; ++a)
    m.period_exact[a] = has_exact ? parse_rational(j["exact"]["period"][a].get<std::string>())
                                  : nice_rational(period[a].get<double>());
  for (std::size_t n = 0; n < nodes.size(); ++n) {
    if (static_cast<int>(nodes[n].size()) != m.dim) throw std::runtime_error("mesh JSON: node " + std::to_string(n) + " has wrong arity");
    Vec2<Rational> p{Rational(0), Rational(0)};
    for (int a = 0; a < m.dim; ++a)
      p[a] = has_exact ? parse_rational(j["exact"]["nodes"][n][a].get<std::string>())
                       : nice_rational(nodes[n][a].get<double>());
    m.nodes_exact.push_back(p);
  }
  for (std::size_t e = 0; e < elements.size(); ++e) {
    const json& verts = elements[e];
    if (static_cast<int>(verts.size()) != m.dim + 1)
      throw std::runtime_error("mesh JSON: element " + std::to_string(e) + " has wrong vertex count");
    Element el;
    for (int i = 0; i <= m.dim; ++i) {
      const json& v = verts[i];
      if (static_cast<int>(v.size()) != m.dim + 1)
        throw std::runtime_error("mesh JSON: element " + std::to_string(e) + " vertex entry has wrong arity");
      el.v[i].node = v[0].get<int>();
      el.v[i].shift = {v[1].get<int>(), m.dim == 2 ? v[2].get<int>() : 0};
    }
    m.elements.push_back(el);
  }
  refresh_doubles(m);
  // Keep the file's double values verbatim when they are present.
  for (int a = 0; a < m.dim; ++a) m.period[a] = period[a].get<double>();
  for (std::size_t n = 0; n < nodes.size(); ++n)
    for (int a = 0; a < m.dim; ++a) m.nodes[n][a] = nodes[n][a].get<double>();
  if (j.contains("pattern")) {
    m.copies = j["pattern"].at("copies").get<int>();
    m.node_class = j["pattern"].at("node_class").get<std::vector<int>>();
    m.element_class = j["pattern"].at("element_class").get<std::vector<int>>();
  } else {
    identity_provenance(m);
  }
  validate_mesh(m);
  return m;
}

}  // namespace fvs
