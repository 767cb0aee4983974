#pragma once

// JSON documents for rings, matrices, complexes, multicomplexes, resolution
// bundles and relation chains. Ring elements are strings: decimal integers,
// rationals as "a/b", prime-field residues as decimal integers; polynomials
// are arrays of coefficients in ascending degree.

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "kbin/cofinal.hpp"
#include "kbin/resolve.hpp"

namespace kbin {

using json = nlohmann::json;

/// Malformed input document; `where` is a JSON path or line:column.
struct input_error : error {
  explicit input_error(const std::string& where, const std::string& what) : error(where + ": " + what) {}
};

namespace schema {
inline constexpr const char* matrix = "kbin.matrix/1";
inline constexpr const char* complex = "kbin.complex/1";
inline constexpr const char* multicomplex = "kbin.multicomplex/1";
inline constexpr const char* resolution = "kbin.resolution/1";
inline constexpr const char* chain = "kbin.chain/1";
inline constexpr const char* formal_class = "kbin.class/1";
}  // namespace schema

using AnyRing = std::variant<Integers, Rationals, PrimeField, Polynomials<Rationals>, Polynomials<PrimeField>>;

// ---------------------------------------------------------------------------
// Parsing helpers

/// Parses text, mapping syntax errors to line:column.
inline json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t k = 0; k < end; ++k) {
      if (text[k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::string msg = e.what();
    if (auto p = msg.find("syntax error"); p != std::string::npos) msg = msg.substr(p);
    throw input_error(source + ":" + std::to_string(line) + ":" + std::to_string(col), msg);
  }
}

inline const json& member(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) throw input_error(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw input_error(path, "missing field '" + key + "'");
  return *it;
}

inline std::size_t as_count(const json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<long long>() < 0) throw input_error(path, "expected a non-negative integer");
  return j.get<std::size_t>();
}

inline void expect_schema(const json& doc, const std::string& want, const std::string& path) {
  const json& s = member(doc, "schema", path);
  if (!s.is_string() || s.get<std::string>() != want)
    throw input_error(path + ".schema", "expected \"" + want + "\", found " + s.dump());
}

// ---------------------------------------------------------------------------
// Rings and elements

inline json ring_to_json(const Integers&) { return {{"kind", "integers"}}; }
inline json ring_to_json(const Rationals&) { return {{"kind", "rationals"}}; }
inline json ring_to_json(const PrimeField& f) { return {{"kind", "prime-field"}, {"p", f.characteristic()}}; }
template <class F>
json ring_to_json(const Polynomials<F>& r) {
  return {{"kind", "polynomials"}, {"field", ring_to_json(r.field())}};
}

inline AnyRing parse_ring(const json& j, const std::string& path) {
  const json& kind = member(j, "kind", path);
  if (!kind.is_string()) throw input_error(path + ".kind", "expected a string");
  const std::string k = kind.get<std::string>();
  auto prime = [&](const json& jj, const std::string& p) {
    const json& pj = member(jj, "p", p);
    if (!pj.is_number_integer()) throw input_error(p + ".p", "expected an integer");
    try {
      return PrimeField(pj.get<std::int64_t>());
    } catch (const error& e) {
      throw input_error(p + ".p", e.what());
    }
  };
  if (k == "integers") return Integers{};
  if (k == "rationals") return Rationals{};
  if (k == "prime-field") return prime(j, path);
  if (k == "polynomials") {
    const json& f = member(j, "field", path);
    const std::string fp = path + ".field";
    const json& fk = member(f, "kind", fp);
    if (fk == "rationals") return Polynomials<Rationals>(Rationals{});
    if (fk == "prime-field") return Polynomials<PrimeField>(prime(f, fp));
    throw input_error(fp + ".kind", "coefficient field must be rationals or prime-field");
  }
  throw input_error(path + ".kind", "unknown ring kind '" + k + "'");
}

inline json element_to_json(const Integers&, const mpz_class& v) { return v.get_str(); }
inline json element_to_json(const Rationals&, const mpq_class& v) {
  return v.get_den() == 1 ? v.get_num().get_str() : v.get_num().get_str() + "/" + v.get_den().get_str();
}
inline json element_to_json(const PrimeField&, std::int64_t v) { return std::to_string(v); }
template <class F>
json element_to_json(const Polynomials<F>& r, const typename Polynomials<F>::value_type& v) {
  json a = json::array();
  for (const auto& c : v.coeffs) a.push_back(element_to_json(r.field(), c));
  return a;
}

namespace detail {
inline mpz_class parse_integer_text(const std::string& s, const std::string& path) {
  mpz_class v;
  const std::string body = !s.empty() && s[0] == '+' ? s.substr(1) : s;
  if (body.empty() || v.set_str(body, 10) != 0) throw input_error(path, "not an integer: \"" + s + "\"");
  return v;
}
inline std::string number_text(const json& j, const std::string& path) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return j.dump();
  throw input_error(path, "expected a string or integer");
}
}  // namespace detail

inline mpz_class element_from_json(const Integers&, const json& j, const std::string& path) {
  return detail::parse_integer_text(detail::number_text(j, path), path);
}
inline mpq_class element_from_json(const Rationals&, const json& j, const std::string& path) {
  const std::string s = detail::number_text(j, path);
  const auto slash = s.find('/');
  if (slash == std::string::npos) return mpq_class(detail::parse_integer_text(s, path));
  const mpz_class num = detail::parse_integer_text(s.substr(0, slash), path);
  const mpz_class den = detail::parse_integer_text(s.substr(slash + 1), path);
  if (den == 0) throw input_error(path, "zero denominator");
  mpq_class q(num, den);
  q.canonicalize();
  return q;
}
inline std::int64_t element_from_json(const PrimeField& f, const json& j, const std::string& path) {
  mpz_class v = detail::parse_integer_text(detail::number_text(j, path), path);
  mpz_class r;
  mpz_fdiv_r_ui(r.get_mpz_t(), v.get_mpz_t(), static_cast<unsigned long>(f.characteristic()));
  return f.from_int(r.get_si());
}
template <class F>
typename Polynomials<F>::value_type element_from_json(const Polynomials<F>& r, const json& j, const std::string& path) {
  if (!j.is_array()) throw input_error(path, "expected a coefficient array");
  std::vector<typename F::value_type> c;
  for (std::size_t k = 0; k < j.size(); ++k)
    c.push_back(element_from_json(r.field(), j[k], path + "[" + std::to_string(k) + "]"));
  return r.from_coefficients(std::move(c));
}

// ---------------------------------------------------------------------------
// Matrices: arrays of rows, shape supplied by context

template <class R>
json matrix_rows(const Matrix<R>& m) {
  json a = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(element_to_json(m.ring(), m(i, j)));
    a.push_back(std::move(row));
  }
  return a;
}

/// Rows of a matrix with a known row count; cols may be unknown (npos).
template <class R>
Matrix<R> matrix_from_rows(const R& ring, const json& j, std::size_t rows, std::size_t cols, const std::string& path) {
  if (!j.is_array()) throw input_error(path, "expected an array of rows");
  if (j.size() != rows)
    throw input_error(path, "expected " + std::to_string(rows) + " rows, found " + std::to_string(j.size()));
  if (cols == static_cast<std::size_t>(-1)) cols = rows == 0 ? 0 : (j[0].is_array() ? j[0].size() : 0);
  Matrix<R> m(ring, rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const std::string rp = path + "[" + std::to_string(i) + "]";
    if (!j[i].is_array()) throw input_error(rp, "expected a row array");
    if (j[i].size() != cols)
      throw input_error(rp, "expected " + std::to_string(cols) + " entries, found " + std::to_string(j[i].size()));
    for (std::size_t k = 0; k < cols; ++k) m(i, k) = element_from_json(ring, j[i][k], rp + "[" + std::to_string(k) + "]");
  }
  return m;
}

template <class R>
json matrix_document(const Matrix<R>& m) {
  return {{"schema", schema::matrix},
          {"ring", ring_to_json(m.ring())},
          {"rows", m.rows()},
          {"cols", m.cols()},
          {"entries", matrix_rows(m)}};
}

template <class R>
Matrix<R> parse_matrix_body(const R& ring, const json& doc, const std::string& path) {
  const std::size_t rows = as_count(member(doc, "rows", path), path + ".rows");
  const std::size_t cols = as_count(member(doc, "cols", path), path + ".cols");
  return matrix_from_rows(ring, member(doc, "entries", path), rows, cols, path + ".entries");
}

// ---------------------------------------------------------------------------
// Modules

template <class R>
json module_to_json(const FpModule<R>& m) {
  json o;
  o["gens"] = m.gens();
  if (m.rels().cols() > 0) o["relations"] = matrix_rows(m.rels());
  return o;
}

template <class R>
FpModule<R> module_from_json(const R& ring, const json& j, const std::string& path) {
  if (!j.is_object()) throw input_error(path, "expected an object");
  std::size_t gens;
  if (j.contains("rank")) {
    if (j.contains("gens") || j.contains("relations"))
      throw input_error(path, "'rank' describes a free module; do not combine it with 'gens' or 'relations'");
    return FpModule<R>::free(ring, as_count(j["rank"], path + ".rank"));
  }
  gens = as_count(member(j, "gens", path), path + ".gens");
  if (!j.contains("relations")) return FpModule<R>::free(ring, gens);
  return FpModule<R>(gens, matrix_from_rows(ring, j["relations"], gens, static_cast<std::size_t>(-1),
                                            path + ".relations"));
}

// ---------------------------------------------------------------------------
// Chain complexes

template <class R>
json complex_document(const ChainComplex<R>& c, const R& ring) {
  json objs = json::array(), diffs = json::array();
  for (const auto& o : c.objects()) objs.push_back(module_to_json(o));
  for (const auto& d : c.diffs()) diffs.push_back(matrix_rows(d));
  return {{"schema", schema::complex}, {"ring", ring_to_json(ring)}, {"objects", objs}, {"differentials", diffs}};
}

template <class R>
ChainComplex<R> parse_complex_body(const R& ring, const json& doc, const std::string& path) {
  const json& objs = member(doc, "objects", path);
  if (!objs.is_array()) throw input_error(path + ".objects", "expected an array");
  std::vector<FpModule<R>> o;
  for (std::size_t k = 0; k < objs.size(); ++k)
    o.push_back(module_from_json(ring, objs[k], path + ".objects[" + std::to_string(k) + "]"));
  const json& ds = member(doc, "differentials", path);
  if (!ds.is_array()) throw input_error(path + ".differentials", "expected an array");
  if (ds.size() + 1 != std::max<std::size_t>(o.size(), 1))
    throw input_error(path + ".differentials",
                      "a complex with " + std::to_string(o.size()) + " objects needs " +
                          std::to_string(o.empty() ? 0 : o.size() - 1) + " differentials");
  std::vector<Matrix<R>> d;
  for (std::size_t k = 1; k < o.size(); ++k)
    d.push_back(matrix_from_rows(ring, ds[k - 1], o[k - 1].gens(), o[k].gens(),
                                 path + ".differentials[" + std::to_string(k - 1) + "]"));
  try {
    return ChainComplex<R>(std::move(o), std::move(d));
  } catch (const error& e) {
    throw input_error(path, e.what());
  }
}

// ---------------------------------------------------------------------------
// Multicomplexes

inline json coord_to_json(const Coord& c) { return json(c); }

inline Coord coord_from_json(const json& j, const Box& box, const std::string& path) {
  if (!j.is_array() || j.size() != box.dim())
    throw input_error(path, "expected " + std::to_string(box.dim()) + " coordinates");
  Coord c;
  for (std::size_t d = 0; d < j.size(); ++d) c.push_back(as_count(j[d], path + "[" + std::to_string(d) + "]"));
  if (!box.contains(c)) throw input_error(path, "coordinate " + format_coord(c) + " outside the support");
  return c;
}

/// Body without schema/ring; objects with no generators and zero
/// differentials are omitted.
template <class R>
json multicomplex_body(const Multicomplex<R>& m) {
  json objs = json::array(), diffs = json::array();
  for (std::size_t idx = 0; idx < m.box.size(); ++idx)
    if (m.objects[idx].gens() > 0) {
      json o = module_to_json(m.objects[idx]);
      o["at"] = coord_to_json(m.box.coord(idx));
      objs.push_back(std::move(o));
    }
  for (std::size_t d = 0; d < m.dim(); ++d)
    for (std::size_t idx = 0; idx < m.box.size(); ++idx) {
      if (!m.has_target(d, idx)) continue;
      const auto& t = m.top[d][idx];
      const auto& b = m.bottom[d][idx];
      if (t.is_zero() && b.is_zero()) continue;
      diffs.push_back({{"direction", d + 1},
                       {"at", coord_to_json(m.box.coord(idx))},
                       {"top", matrix_rows(t)},
                       {"bottom", matrix_rows(b)}});
    }
  return {{"dimension", m.dim()}, {"extents", m.box.extents()}, {"objects", objs}, {"differentials", diffs}};
}

template <class R>
json multicomplex_document(const Multicomplex<R>& m) {
  json j = multicomplex_body(m);
  j["schema"] = schema::multicomplex;
  j["ring"] = ring_to_json(m.ring);
  return j;
}

template <class R>
Multicomplex<R> parse_multicomplex_body(const R& ring, const json& doc, const std::string& path) {
  const std::size_t n = as_count(member(doc, "dimension", path), path + ".dimension");
  const json& ext = member(doc, "extents", path);
  if (!ext.is_array() || ext.size() != n)
    throw input_error(path + ".extents", "expected " + std::to_string(n) + " extents");
  std::vector<std::size_t> e;
  for (std::size_t d = 0; d < n; ++d) e.push_back(as_count(ext[d], path + ".extents[" + std::to_string(d) + "]"));
  const Box box(e);
  std::vector<FpModule<R>> objs(box.size(), FpModule<R>::zero(ring));
  std::vector<bool> seen(box.size(), false);
  const json& oj = member(doc, "objects", path);
  if (!oj.is_array()) throw input_error(path + ".objects", "expected an array");
  for (std::size_t k = 0; k < oj.size(); ++k) {
    const std::string p = path + ".objects[" + std::to_string(k) + "]";
    const Coord c = coord_from_json(member(oj[k], "at", p), box, p + ".at");
    const std::size_t idx = box.index(c);
    if (seen[idx]) throw input_error(p, "duplicate object at " + format_coord(c));
    seen[idx] = true;
    objs[idx] = module_from_json(ring, oj[k], p);
  }
  Multicomplex<R> m = Multicomplex<R>::with_objects(ring, box, std::move(objs));
  const json& dj = member(doc, "differentials", path);
  if (!dj.is_array()) throw input_error(path + ".differentials", "expected an array");
  std::vector<std::vector<bool>> dseen(n, std::vector<bool>(box.size(), false));
  for (std::size_t k = 0; k < dj.size(); ++k) {
    const std::string p = path + ".differentials[" + std::to_string(k) + "]";
    const std::size_t dir1 = as_count(member(dj[k], "direction", p), p + ".direction");
    if (dir1 < 1 || dir1 > n) throw input_error(p + ".direction", "direction must lie in 1.." + std::to_string(n));
    const std::size_t d = dir1 - 1;
    const Coord c = coord_from_json(member(dj[k], "at", p), box, p + ".at");
    const std::size_t idx = box.index(c);
    if (c[d] == 0) throw input_error(p + ".at", "no target below " + format_coord(c) + " in direction " + std::to_string(dir1));
    if (dseen[d][idx]) throw input_error(p, "duplicate differential");
    dseen[d][idx] = true;
    const std::size_t rows = m.objects[m.target_index(d, idx)].gens(), cols = m.objects[idx].gens();
    const std::string loc = " (direction " + std::to_string(dir1) + " at " + format_coord(c) + ")";
    m.top[d][idx] = matrix_from_rows(ring, member(dj[k], "top", p), rows, cols, p + ".top" + loc);
    m.bottom[d][idx] = matrix_from_rows(ring, member(dj[k], "bottom", p), rows, cols, p + ".bottom" + loc);
  }
  return m;
}

// ---------------------------------------------------------------------------
// Morphisms of multicomplexes: extents plus one matrix per coordinate

template <class R>
json morphism_to_json(const MultiMorphism<R>& f) {
  json comps = json::array();
  for (const auto& c : f.components) comps.push_back({{"rows", c.rows()}, {"cols", c.cols()}, {"entries", matrix_rows(c)}});
  return {{"extents", f.box.extents()}, {"components", comps}};
}

template <class R>
MultiMorphism<R> morphism_from_json(const R& ring, const json& j, const std::string& path) {
  const json& ext = member(j, "extents", path);
  if (!ext.is_array()) throw input_error(path + ".extents", "expected an array");
  std::vector<std::size_t> e;
  for (std::size_t d = 0; d < ext.size(); ++d) e.push_back(as_count(ext[d], path + ".extents[" + std::to_string(d) + "]"));
  MultiMorphism<R> f{Box(e), {}};
  const json& comps = member(j, "components", path);
  if (!comps.is_array() || comps.size() != f.box.size())
    throw input_error(path + ".components", "expected " + std::to_string(f.box.size()) + " components");
  for (std::size_t k = 0; k < comps.size(); ++k)
    f.components.push_back(parse_matrix_body(ring, comps[k], path + ".components[" + std::to_string(k) + "]"));
  return f;
}

// ---------------------------------------------------------------------------
// Resolution bundles

template <class R>
json resolution_document(const Multicomplex<R>& input, const ResolutionResult<R>& r) {
  return {{"schema", schema::resolution},
          {"ring", ring_to_json(input.ring)},
          {"input", multicomplex_body(input)},
          {"route", r.route},
          {"direction", r.direction < 0 ? json(nullptr) : json(r.direction + 1)},
          {"P", multicomplex_body(r.P)},
          {"Pprime", multicomplex_body(r.Pprime)},
          {"target", multicomplex_body(r.target)},
          {"zeta", morphism_to_json(r.zeta)},
          {"iota", morphism_to_json(r.iota)}};
}

template <class R>
std::pair<Multicomplex<R>, ResolutionResult<R>> parse_resolution_body(const R& ring, const json& doc,
                                                                      const std::string& path) {
  Multicomplex<R> input = parse_multicomplex_body(ring, member(doc, "input", path), path + ".input");
  ResolutionResult<R> r;
  const json& route = member(doc, "route", path);
  if (!route.is_string()) throw input_error(path + ".route", "expected a string");
  r.route = route.get<std::string>();
  const json& dir = member(doc, "direction", path);
  r.direction = dir.is_null() ? -1 : static_cast<long>(as_count(dir, path + ".direction")) - 1;
  r.P = parse_multicomplex_body(ring, member(doc, "P", path), path + ".P");
  r.Pprime = parse_multicomplex_body(ring, member(doc, "Pprime", path), path + ".Pprime");
  r.target = parse_multicomplex_body(ring, member(doc, "target", path), path + ".target");
  r.zeta = morphism_from_json(ring, member(doc, "zeta", path), path + ".zeta");
  r.iota = morphism_from_json(ring, member(doc, "iota", path), path + ".iota");
  return {std::move(input), std::move(r)};
}

// ---------------------------------------------------------------------------
// Formal classes and relation chains

inline json class_to_json(const FormalClass& x) {
  json j = json::object();
  for (const auto& [name, c] : x.coef) j[name] = c;
  return j;
}

inline FormalClass class_from_json(const json& j, const std::string& path) {
  if (!j.is_object()) throw input_error(path, "expected an object of coefficients");
  FormalClass x;
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!it.value().is_number_integer()) throw input_error(path + "." + it.key(), "expected an integer coefficient");
    x.add(it.key(), it.value().get<long>());
  }
  return x;
}

template <class R>
json pool_to_json(const GeneratorPool<R>& pool) {
  json j = json::object();
  for (const auto& [name, m] : pool) j[name] = multicomplex_body(m);
  return j;
}

template <class R>
GeneratorPool<R> pool_from_json(const R& ring, const json& j, const std::string& path) {
  if (!j.is_object()) throw input_error(path, "expected an object of generators");
  GeneratorPool<R> pool;
  for (auto it = j.begin(); it != j.end(); ++it)
    pool.emplace(it.key(), parse_multicomplex_body(ring, it.value(), path + "." + it.key()));
  return pool;
}

template <class R>
json chain_document(const RelationChain<R>& chain, const GeneratorPool<R>& pool, const R& ring) {
  json steps = json::array();
  for (const auto& st : chain.steps) {
    json s = {{"kind", step_kind_name(st.kind)}, {"coefficient", st.coefficient}, {"mid", st.mid}};
    if (st.direction >= 0) s["direction"] = st.direction + 1;
    if (st.kind != StepKind::diagonal) {
      s["sub"] = st.sub;
      s["mono"] = morphism_to_json(st.mono);
    }
    if (st.kind == StepKind::ses) {
      s["quot"] = st.quot;
      s["epi"] = morphism_to_json(st.epi);
    }
    steps.push_back(std::move(s));
  }
  return {{"schema", schema::chain},
          {"ring", ring_to_json(ring)},
          {"generators", pool_to_json(pool)},
          {"start", class_to_json(chain.start)},
          {"end", class_to_json(chain.end)},
          {"steps", steps}};
}

template <class R>
std::pair<RelationChain<R>, GeneratorPool<R>> parse_chain_body(const R& ring, const json& doc,
                                                               const std::string& path) {
  GeneratorPool<R> pool = pool_from_json(ring, member(doc, "generators", path), path + ".generators");
  RelationChain<R> chain;
  chain.start = class_from_json(member(doc, "start", path), path + ".start");
  chain.end = class_from_json(member(doc, "end", path), path + ".end");
  const json& steps = member(doc, "steps", path);
  if (!steps.is_array()) throw input_error(path + ".steps", "expected an array");
  for (std::size_t k = 0; k < steps.size(); ++k) {
    const std::string p = path + ".steps[" + std::to_string(k) + "]";
    const json& sj = steps[k];
    RelationStep<R> st;
    const json& kind = member(sj, "kind", p);
    if (kind == "ses") st.kind = StepKind::ses;
    else if (kind == "diagonal") st.kind = StepKind::diagonal;
    else if (kind == "iso") st.kind = StepKind::iso;
    else throw input_error(p + ".kind", "expected \"ses\", \"diagonal\" or \"iso\"");
    const json& c = member(sj, "coefficient", p);
    if (!c.is_number_integer()) throw input_error(p + ".coefficient", "expected an integer");
    st.coefficient = c.get<long>();
    auto name = [&](const char* key) {
      const json& v = member(sj, key, p);
      if (!v.is_string()) throw input_error(p + "." + key, "expected a generator name");
      return v.get<std::string>();
    };
    st.mid = name("mid");
    if (sj.contains("direction") && !sj["direction"].is_null()) {
      const std::size_t d = as_count(sj["direction"], p + ".direction");
      if (d < 1) throw input_error(p + ".direction", "directions start at 1");
      st.direction = static_cast<long>(d) - 1;
    }
    if (st.kind != StepKind::diagonal) {
      st.sub = name("sub");
      st.mono = morphism_from_json(ring, member(sj, "mono", p), p + ".mono");
    }
    if (st.kind == StepKind::ses) {
      st.quot = name("quot");
      st.epi = morphism_from_json(ring, member(sj, "epi", p), p + ".epi");
    }
    chain.steps.push_back(std::move(st));
  }
  return {std::move(chain), std::move(pool)};
}

/// Class document: generators, the class, and a diagonal direction per
/// generator (1-based).
template <class R>
json class_document(const FormalClass& x, const GeneratorPool<R>& pool,
                    const std::map<std::string, std::size_t>& directions, const R& ring) {
  json dirs = json::object();
  for (const auto& [name, d] : directions) dirs[name] = d + 1;
  return {{"schema", schema::formal_class},
          {"ring", ring_to_json(ring)},
          {"generators", pool_to_json(pool)},
          {"class", class_to_json(x)},
          {"directions", dirs}};
}

template <class R>
std::tuple<FormalClass, GeneratorPool<R>, std::map<std::string, std::size_t>> parse_class_body(
    const R& ring, const json& doc, const std::string& path) {
  GeneratorPool<R> pool = pool_from_json(ring, member(doc, "generators", path), path + ".generators");
  FormalClass x = class_from_json(member(doc, "class", path), path + ".class");
  std::map<std::string, std::size_t> dirs;
  const json& dj = member(doc, "directions", path);
  if (!dj.is_object()) throw input_error(path + ".directions", "expected an object");
  for (auto it = dj.begin(); it != dj.end(); ++it) {
    const std::size_t d = as_count(it.value(), path + ".directions." + it.key());
    if (d < 1) throw input_error(path + ".directions." + it.key(), "directions start at 1");
    dirs[it.key()] = d - 1;
  }
  return {std::move(x), std::move(pool), std::move(dirs)};
}

/// FNV-1a 64-bit digest, printed as 16 hex digits.
inline std::string fnv1a_digest(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : data) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  static const char* hex = "0123456789abcdef";
  std::string s(16, '0');
  for (int k = 15; k >= 0; --k) {
    s[static_cast<std::size_t>(k)] = hex[h & 0xf];
    h >>= 4;
  }
  return s;
}

}  // namespace kbin
