// kbin: command-line front end. Every command prints a JSON report on
// stdout; exit status 0 when all verdicts pass, 1 when one fails, 2 on
// malformed input or usage errors.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include <CLI11.hpp>

#include "kbin/kbin.hpp"

namespace {

using namespace kbin;

struct Report {
  std::string command;
  std::string input_digest;
  std::uint64_t seed = 0;
  json verdicts = json::object();
  json witnesses = json::object();
  std::optional<json> artifact;  // written to --output when given

  bool passed() const {
    for (const auto& v : verdicts) if (!v.get<bool>()) return false;
    return true;
  }
};

struct Options {
  std::string input;
  std::string output;
  std::uint64_t seed = 0;
  std::size_t direction = 1;
  std::string route = "binary";
  std::string kind = "multicomplex";
  std::string ring = "integers";
  std::size_t dim = 1;
  std::size_t diagonal = 0;
  std::size_t max_extent = 3;
  std::size_t max_rank = 3;
  std::size_t rows = 3, cols = 3;
  std::size_t generators = 3;
  bool fp = false;
};

std::string read_input(const std::string& path) {
  if (path == "-") return {std::istreambuf_iterator<char>(std::cin), {}};
  std::ifstream in(path, std::ios::binary);
  if (!in) throw input_error(path, "cannot open file");
  return {std::istreambuf_iterator<char>(in), {}};
}

json coords_to_json(const std::set<Coord>& s) {
  json a = json::array();
  for (const auto& c : s) a.push_back(c);
  return a;
}

json directions_to_json(const DiagonalityReport& r) {
  json a = json::array();
  for (std::size_t d : r.directions) a.push_back(d + 1);
  return a;
}

json validation_to_json(const ValidationReport& v) {
  json j = {{"ok", v.ok}};
  if (!v.ok) {
    j["message"] = v.message;
    if (!v.coord.empty()) j["at"] = v.coord;
    if (v.direction >= 0) j["direction"] = v.direction + 1;
    if (!v.side.empty()) j["side"] = v.side;
  }
  return j;
}

template <class R>
json canonical_to_json(const CanonicalForm<R>& c, const R& ring) {
  json t = json::array();
  for (const auto& x : c.torsion) t.push_back(element_to_json(ring, x));
  return {{"free_rank", c.free_rank}, {"torsion", t}};
}

template <class R>
void check_dimension(const Multicomplex<R>& m, std::size_t want, const std::string& what) {
  if (m.dim() != want)
    throw input_error("$.dimension", what + " expects dimension " + std::to_string(want) + ", found " +
                                         std::to_string(m.dim()));
}

std::size_t zero_based_direction(std::size_t d, std::size_t dim) {
  if (d < 1 || d > dim)
    throw input_error("--direction", "direction must lie in 1.." + std::to_string(dim));
  return d - 1;
}

// ---------------------------------------------------------------------------
// Commands on parsed documents

template <class R>
void cmd_check(const R& ring, const json& doc, Report& rep) {
  const std::string s = doc.value("schema", "");
  if (s == schema::complex) {
    const auto c = parse_complex_body(ring, doc, "$");
    const auto w = acyclicity_witness(c, AcyclicityMode::fp, ring);
    rep.verdicts["acyclic"] = w.ok;
    if (!w.ok) rep.witnesses["failure"] = {{"degree", w.failing_degree}, {"message", w.message}};
    return;
  }
  expect_schema(doc, schema::multicomplex, "$");
  const auto m = parse_multicomplex_body(ring, doc, "$");
  const auto v = validate(m);
  rep.verdicts["valid"] = v.ok;
  rep.witnesses["validation"] = validation_to_json(v);
  rep.witnesses["diagonal_directions"] = directions_to_json(diagonal_directions(m));
  rep.witnesses["free"] = m.all_free();
}

template <class R>
void cmd_homology(const R& ring, const json& doc, Report& rep) {
  expect_schema(doc, schema::complex, "$");
  const auto c = parse_complex_body(ring, doc, "$");
  json hs = json::array();
  bool all_zero = true;
  for (long k = 0; k < static_cast<long>(c.size()); ++k) {
    const auto h = homology(c, k, ring).canonical();
    all_zero = all_zero && h.is_zero();
    json e = canonical_to_json(h, ring);
    e["degree"] = k;
    hs.push_back(std::move(e));
  }
  const auto w = acyclicity_witness(c, AcyclicityMode::fp, ring);
  bool witness_checks = true;
  if (w.ok) witness_checks = verify_acyclicity_witness(c, w.witness, AcyclicityMode::fp, ring);
  rep.witnesses["homology"] = hs;
  rep.witnesses["acyclic"] = all_zero;
  rep.verdicts["witness_agrees_with_homology"] = w.ok == all_zero;
  rep.verdicts["witness_verifies"] = witness_checks;
}

template <class R>
void cmd_snf(const R& ring, const json& doc, Report& rep) {
  expect_schema(doc, schema::matrix, "$");
  const auto a = parse_matrix_body(ring, doc, "$");
  const auto d = smith(a);
  bool divides = true;
  const auto diag = d.diagonal();
  for (std::size_t i = 0; i + 1 < d.rank; ++i)
    divides = divides && ring.divide_exact(diag[i + 1], diag[i]).has_value();
  for (std::size_t i = d.rank; i < diag.size(); ++i) divides = divides && ring.is_zero(diag[i]);
  bool diagonal = true;
  for (std::size_t i = 0; i < d.S.rows(); ++i)
    for (std::size_t j = 0; j < d.S.cols(); ++j)
      if (i != j && !ring.is_zero(d.S(i, j))) diagonal = false;
  rep.verdicts["factorization"] = d.U * a * d.V == d.S;
  rep.verdicts["inverses"] = d.U * d.Uinv == Matrix<R>::identity(ring, a.rows()) &&
                             d.V * d.Vinv == Matrix<R>::identity(ring, a.cols());
  rep.verdicts["diagonal"] = diagonal;
  rep.verdicts["divisibility_chain"] = divides;
  json dj = json::array();
  for (std::size_t i = 0; i < d.rank; ++i) dj.push_back(element_to_json(ring, diag[i]));
  rep.witnesses["invariant_factors"] = dj;
  rep.witnesses["rank"] = d.rank;
  rep.witnesses["U"] = matrix_rows(d.U);
  rep.witnesses["S"] = matrix_rows(d.S);
  rep.witnesses["V"] = matrix_rows(d.V);
}

template <class R>
void report_resolution(const Multicomplex<R>& m, const ResolutionResult<R>& r, Report& rep) {
  const auto v = verify_resolution(m, r);
  rep.verdicts["target_matches_input"] = v.target_matches;
  rep.verdicts["P_valid_projective"] = v.p_valid;
  rep.verdicts["Pprime_valid_projective"] = v.pprime_valid;
  rep.verdicts["zeta_surjective"] = v.zeta_epi;
  rep.verdicts["short_exact"] = v.ses;
  rep.verdicts["kernel_matches"] = v.kernel_forms;
  rep.verdicts["diagonality_preserved"] = v.diagonality;
  rep.verdicts["all_checks"] = v.ok;
  rep.witnesses["failures"] = v.failures;
  rep.witnesses["route"] = r.route;
  std::size_t pg = 0, kg = 0;
  for (const auto& o : r.P.objects) pg += o.gens();
  for (const auto& o : r.Pprime.objects) kg += o.gens();
  rep.witnesses["P_generators"] = pg;
  rep.witnesses["Pprime_generators"] = kg;
  rep.artifact = resolution_document(m, r);
}

template <class R>
void cmd_resolve(const R& ring, const json& doc, const Options& opt, Report& rep) {
  expect_schema(doc, schema::multicomplex, "$");
  const auto m = parse_multicomplex_body(ring, doc, "$");
  check_dimension(m, 1, "resolve");
  const auto v = validate(m);
  if (!v.ok) throw input_error("$", "input is not a binary acyclic complex: " + v.message);
  ResolutionResult<R> r;
  if (opt.route == "binary") {
    r = resolve_binary(m);
  } else if (opt.route == "diagonal") {
    if (!is_diagonal(m, 0)) throw input_error("$", "the diagonal route needs top and bottom differentials to agree");
    r = resolve_diagonal(m);
  } else {
    throw input_error("--route", "expected binary or diagonal");
  }
  report_resolution(m, r, rep);
}

template <class R>
void cmd_resolve_multi(const R& ring, const json& doc, Report& rep) {
  expect_schema(doc, schema::multicomplex, "$");
  const auto m = parse_multicomplex_body(ring, doc, "$");
  const auto v = validate(m);
  if (!v.ok) throw input_error("$", "input is not a valid binary multicomplex: " + v.message);
  report_resolution(m, resolve_multi(m), rep);
}

template <class R>
json chain_with_predicate(const RelationChain<R>& chain, const GeneratorPool<R>& pool, const R& ring) {
  json j = chain_document(chain, pool, ring);
  j["diagonal_generators"] = "even-rank";
  return j;
}

template <class R>
GeneratorPredicate<R> predicate_of(const json& doc) {
  if (!doc.contains("diagonal_generators")) return nullptr;
  const json& p = doc["diagonal_generators"];
  if (p == "any") return nullptr;
  if (p == "even-rank") return [](const Multicomplex<R>& m) { return in_subcategory_even(m); };
  throw input_error("$.diagonal_generators", "expected \"any\" or \"even-rank\"");
}

template <class R>
void cmd_verify_chain(const R& ring, const json& doc, Report& rep) {
  expect_schema(doc, schema::chain, "$");
  auto [chain, pool] = parse_chain_body(ring, doc, "$");
  const auto v = verify_chain(chain, pool, predicate_of<R>(doc));
  rep.verdicts["chain_verifies"] = v.ok;
  rep.witnesses["steps"] = chain.steps.size();
  rep.witnesses["final_class"] = class_to_json(v.final_class);
  if (!v.ok) rep.witnesses["failure"] = {{"step", v.failing_step}, {"message", v.message}};
}

template <class R>
void cmd_recheck(const R& ring, const json& doc, Report& rep) {
  const std::string s = doc.value("schema", "");
  if (s == schema::chain) return cmd_verify_chain(ring, doc, rep);
  expect_schema(doc, schema::resolution, "$");
  auto [m, r] = parse_resolution_body(ring, doc, "$");
  report_resolution(m, r, rep);
  rep.artifact.reset();
}

template <class R>
void cmd_cofinalize(const R& ring, const json& doc, const Options& opt, Report& rep) {
  (void)ring;
  expect_schema(doc, schema::multicomplex, "$");
  const auto n = parse_multicomplex_body(ring, doc, "$");
  if (!n.all_free()) throw input_error("$.objects", "complements need free objects");
  const auto v = validate(n, AcyclicityMode::free);
  if (!v.ok) throw input_error("$", "input is not a valid binary multicomplex: " + v.message);
  const std::size_t i = n.dim() == 0 ? 0 : zero_based_direction(opt.direction, n.dim());
  const auto t = complement(n, static_cast<long>(i));
  const auto sum = direct_sum(n, t);
  rep.verdicts["complement_valid"] = validate(t, AcyclicityMode::free).ok;
  rep.verdicts["sum_has_even_ranks"] = in_subcategory_even(sum);
  rep.verdicts["diagonal_in_direction"] = n.dim() == 0 || is_diagonal(t, i);
  bool kept = true;
  for (std::size_t d : diagonal_directions(n).directions) kept = kept && is_diagonal(t, d);
  rep.verdicts["diagonality_preserved"] = kept;
  const auto cn = rel_class(n), ct = rel_class(t);
  rep.verdicts["parity_classes_agree"] = cn == ct;
  rep.witnesses["parity_class_input"] = coords_to_json(cn);
  rep.witnesses["parity_class_complement"] = coords_to_json(ct);
  rep.witnesses["complement_diagonal_directions"] = directions_to_json(diagonal_directions(t));
  rep.witnesses["complement"] = multicomplex_document(t);
  rep.artifact = multicomplex_document(t);
}

template <class R>
void cmd_represent(const R& ring, const json& doc, const Options& opt, Report& rep) {
  expect_schema(doc, schema::formal_class, "$");
  auto [x, pool, dirs] = parse_class_body(ring, doc, "$");
  std::size_t dim = 0;
  for (const auto& [name, c] : x.coef) {
    auto it = pool.find(name);
    if (it == pool.end()) throw input_error("$.class." + name, "unknown generator");
    dim = it->second.dim();
  }
  const std::size_t i = zero_based_direction(opt.direction, std::max<std::size_t>(dim, 1));
  DiagonalRepresentation<R> r;
  try {
    r = diagonal_represent(x, pool, dirs, i);
  } catch (const error& e) {
    throw input_error("$", e.what());
  }
  const auto v = verify_chain(r.chain, r.pool, GeneratorPredicate<R>(in_subcategory_even<R>));
  rep.verdicts["chain_verifies"] = v.ok;
  rep.verdicts["representative_diagonal"] = dim == 0 || is_diagonal(r.t, i);
  rep.verdicts["representative_valid"] = validate(r.t, AcyclicityMode::free).ok;
  if (!v.ok) rep.witnesses["failure"] = {{"step", v.failing_step}, {"message", v.message}};
  rep.witnesses["representative"] = r.t_name;
  rep.witnesses["steps"] = r.chain.steps.size();
  rep.witnesses["end_class"] = class_to_json(r.chain.end);
  rep.artifact = chain_with_predicate(r.chain, r.pool, ring);
}

template <class R>
void cmd_torsion(const R& ring, const json& doc, Report& rep) {
  expect_schema(doc, schema::multicomplex, "$");
  const auto m = parse_multicomplex_body(ring, doc, "$");
  check_dimension(m, 1, "torsion");
  if (!m.all_free()) throw input_error("$.objects", "torsion needs free objects");
  const auto v = validate(m, AcyclicityMode::free);
  if (!v.ok) throw input_error("$", "input is not a binary acyclic complex: " + v.message);
  const auto tau = torsion(m);
  rep.verdicts["unit"] = ring.is_unit(tau);
  rep.witnesses["torsion"] = element_to_json(ring, tau);
  rep.witnesses["diagonal"] = is_diagonal(m, 0);
}

// ---------------------------------------------------------------------------
// Instance generation

AnyRing ring_from_flag(const std::string& s) {
  auto parse_prime = [&](const std::string& t) {
    try {
      return PrimeField(std::stoll(t));
    } catch (const std::logic_error&) {
      throw input_error("--ring", "bad characteristic '" + t + "'");
    }
  };
  if (s == "integers") return Integers{};
  if (s == "rationals") return Rationals{};
  if (s.rfind("prime-field:", 0) == 0) return parse_prime(s.substr(12));
  if (s == "polynomials:rationals") return Polynomials<Rationals>(Rationals{});
  if (s.rfind("polynomials:prime-field:", 0) == 0) return Polynomials<PrimeField>(parse_prime(s.substr(24)));
  throw input_error("--ring", "expected integers, rationals, prime-field:P, polynomials:rationals or "
                              "polynomials:prime-field:P");
}

template <class R>
json generate(const R& ring, const Options& opt, Rng& rng) {
  MultiOptions mo;
  mo.dim = opt.dim;
  mo.max_extent = opt.max_extent;
  mo.max_rank = opt.max_rank;
  mo.fp = opt.fp;
  if (opt.diagonal > 0) mo.diagonal_direction = static_cast<long>(zero_based_direction(opt.diagonal, opt.dim));
  if (opt.kind == "matrix") return matrix_document(random_matrix(ring, opt.rows, opt.cols, rng, 6));
  if (opt.kind == "complex") return complex_document(random_complex(ring, rng, opt.max_extent + 1, opt.max_rank, true), ring);
  if (opt.kind == "multicomplex") return multicomplex_document(random_multicomplex(ring, rng, mo));
  if (opt.kind == "class") {
    if (opt.dim == 0) throw input_error("--dim", "classes need dimension at least 1");
    GeneratorPool<R> pool;
    FormalClass x;
    std::map<std::string, std::size_t> dirs;
    mo.fp = false;
    for (std::size_t g = 0; g < opt.generators; ++g) {
      const std::string name = "g" + std::to_string(g + 1);
      mo.diagonal_direction = rng.uniform(0, static_cast<long>(opt.dim) - 1);
      pool.emplace(name, random_multicomplex(ring, rng, mo));
      dirs[name] = static_cast<std::size_t>(mo.diagonal_direction);
      long c = 0;
      while (c == 0) c = rng.uniform(-2, 2);
      x.add(name, c);
    }
    return class_document(x, pool, dirs, ring);
  }
  throw input_error("--kind", "expected matrix, complex, multicomplex or class");
}

// ---------------------------------------------------------------------------

int finish(const Report& rep, const Options& opt, std::chrono::steady_clock::time_point start) {
  if (rep.artifact && !opt.output.empty()) {
    std::ofstream out(opt.output);
    if (!out) throw input_error(opt.output, "cannot write file");
    out << rep.artifact->dump(2) << "\n";
  }
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);
  json j = {{"command", rep.command},
            {"input_digest", rep.input_digest},
            {"seed", rep.seed},
            {"status", rep.passed() ? "pass" : "fail"},
            {"verdicts", rep.verdicts},
            {"witnesses", rep.witnesses},
            {"timing_ms", ms.count()}};
  std::cout << j.dump(2) << "\n";
  return rep.passed() ? 0 : 1;
}

int run(const std::string& command, const Options& opt) {
  const auto start = std::chrono::steady_clock::now();
  Report rep;
  rep.command = command;
  rep.seed = opt.seed;
  if (command == "gen") {
    std::ostringstream params;
    params << opt.kind << "|" << opt.ring << "|" << opt.dim << "|" << opt.diagonal << "|" << opt.fp << "|"
           << opt.max_extent << "|" << opt.max_rank << "|" << opt.rows << "|" << opt.cols << "|" << opt.generators;
    rep.input_digest = fnv1a_digest(params.str());
    Rng rng(opt.seed);
    json inst = std::visit([&](const auto& ring) { return generate(ring, opt, rng); }, ring_from_flag(opt.ring));
    rep.verdicts["generated"] = true;
    rep.witnesses["instance"] = inst;
    rep.artifact = inst;
    return finish(rep, opt, start);
  }
  const std::string text = read_input(opt.input);
  rep.input_digest = fnv1a_digest(text);
  const json doc = parse_json_text(text, opt.input);
  const AnyRing any = parse_ring(member(doc, "ring", "$"), "$.ring");
  std::visit(
      [&](const auto& ring) {
        if (command == "check") cmd_check(ring, doc, rep);
        else if (command == "homology") cmd_homology(ring, doc, rep);
        else if (command == "snf") cmd_snf(ring, doc, rep);
        else if (command == "resolve") cmd_resolve(ring, doc, opt, rep);
        else if (command == "resolve-multi") cmd_resolve_multi(ring, doc, rep);
        else if (command == "cofinalize") cmd_cofinalize(ring, doc, opt, rep);
        else if (command == "represent-diagonal") cmd_represent(ring, doc, opt, rep);
        else if (command == "verify-chain") cmd_verify_chain(ring, doc, rep);
        else if (command == "torsion") cmd_torsion(ring, doc, rep);
        else if (command == "recheck") cmd_recheck(ring, doc, rep);
      },
      any);
  return finish(rep, opt, start);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kbin: binary multicomplexes, resolutions and K-group relations"};
  app.require_subcommand(1);
  app.fallthrough();
  Options opt;
  if (const char* s = std::getenv("KBIN_SEED")) {
    try {
      opt.seed = std::stoull(s);
    } catch (const std::logic_error&) {
      std::cerr << "kbin: KBIN_SEED is not an unsigned integer\n";
      return 2;
    }
  }
  app.add_option("--seed", opt.seed, "random seed (default: KBIN_SEED or 0)");
  app.add_option("-o,--output", opt.output, "write the produced document to this file");

  auto with_input = [&](const std::string& name, const std::string& help) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("input", opt.input, "input JSON document ('-' for stdin)")->required();
    return sub;
  };
  with_input("check", "validate a multicomplex or check a complex for acyclicity");
  with_input("homology", "homology of a chain complex with an acyclicity witness");
  with_input("snf", "Smith normal form with transformation matrices");
  auto* res = with_input("resolve", "projective resolution of a binary acyclic complex");
  res->add_option("--route", opt.route, "binary (doubled complex) or diagonal (staircase)")
      ->check(CLI::IsMember({"binary", "diagonal"}));
  with_input("resolve-multi", "projective resolution of a binary multicomplex");
  auto* cof = with_input("cofinalize", "complement making every rank even");
  cof->add_option("--direction", opt.direction, "direction in which the complement is diagonal (1-based)");
  auto* rep = with_input("represent-diagonal", "rewrite a class as one generator diagonal in a direction");
  rep->add_option("--direction", opt.direction, "target direction (1-based)");
  with_input("verify-chain", "check a relation chain step by step");
  with_input("torsion", "torsion of a free binary acyclic complex");
  with_input("recheck", "re-verify a resolution bundle or relation chain from scratch");
  auto* gen = app.add_subcommand("gen", "generate a random instance");
  gen->add_option("--kind", opt.kind, "matrix, complex, multicomplex or class")
      ->check(CLI::IsMember({"matrix", "complex", "multicomplex", "class"}));
  gen->add_option("--ring", opt.ring, "integers, rationals, prime-field:P, polynomials:rationals, polynomials:prime-field:P");
  gen->add_option("--dim", opt.dim, "multicomplex dimension");
  gen->add_option("--diagonal", opt.diagonal, "make the instance diagonal in this direction (1-based)");
  gen->add_flag("--fp", opt.fp, "allow torsion in the objects");
  gen->add_option("--max-extent", opt.max_extent, "support length per direction");
  gen->add_option("--max-rank", opt.max_rank, "generators per object");
  gen->add_option("--rows", opt.rows, "matrix rows");
  gen->add_option("--cols", opt.cols, "matrix columns");
  gen->add_option("--generators", opt.generators, "generators in a class");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return run(command, opt);
  } catch (const std::exception& e) {
    std::cerr << "kbin " << command << ": " << e.what() << "\n";
    std::cout << json{{"command", command}, {"status", "error"}, {"error", e.what()}}.dump(2) << "\n";
    return 2;
  }
}
