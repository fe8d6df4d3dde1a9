#include "pxbih/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>

#include "pxbih/error.hpp"

namespace pxbih {
namespace {

[[noreturn]] void fail(const std::string& msg) { throw Error(ErrorKind::kConfig, msg); }

// Reads one JSON object, remembering which keys were consumed.
class Block {
 public:
  Block(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(path_ + " must be a JSON object");
  }

  bool has(const char* key) const { return j_.contains(key); }

  const json& raw(const char* key) {
    used_.insert(key);
    return j_.at(key);
  }

  template <class T>
  T get(const char* key, T fallback) {
    if (!has(key)) return fallback;
    return as<T>(raw(key), key);
  }

  template <class T>
  T as(const json& v, const char* key) const {
    if constexpr (std::is_same_v<T, double>) {
      if (!v.is_number()) fail(where(key) + " must be a number");
    } else if constexpr (std::is_integral_v<T> && !std::is_same_v<T, bool>) {
      if (!v.is_number_integer()) fail(where(key) + " must be an integer");
      if (std::is_unsigned_v<T> && v.get<long long>() < 0) fail(where(key) + " must be >= 0");
    }
    try {
      return v.get<T>();
    } catch (const json::exception&) {
      fail(where(key) + " has the wrong type");
    }
  }

  std::string where(const char* key) const { return path_ + "." + key; }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!used_.count(it.key())) fail("unknown key " + path_ + "." + it.key());
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> used_;
};

std::optional<double> parse_number(std::string_view s, std::size_t& i) {
  double v = 0.0;
  auto res = std::from_chars(s.data() + i, s.data() + s.size(), v);
  if (res.ec != std::errc()) return std::nullopt;
  i = static_cast<std::size_t>(res.ptr - s.data());
  return v;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

json exponent_or_null(const std::optional<int>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

FieldExpr FieldExpr::constant(double v) {
  FieldExpr e;
  e.kind = Kind::kConstant;
  e.a = v;
  return e;
}

FieldExpr FieldExpr::parse(const std::string& text) {
  FieldExpr e;
  e.text = text;
  if (ends_with(text, ".json")) {
    e.kind = Kind::kFile;
    return e;
  }
  std::string s;
  bool gap = false;
  for (char ch : text) {
    if (std::isspace(static_cast<unsigned char>(ch))) {
      gap = !s.empty();
      continue;
    }
    const bool joins = std::isalnum(static_cast<unsigned char>(ch)) || ch == '.';
    const char last = s.empty() ? '\0' : s.back();
    if (gap && joins && (std::isalnum(static_cast<unsigned char>(last)) || last == '.'))
      fail("missing operator in field expression '" + text + "'");
    gap = false;
    s.push_back(ch);
  }
  if (s.empty()) fail("empty field expression");
  e.kind = Kind::kAffine;
  std::size_t i = 0;
  bool first = true;
  while (i < s.size()) {
    double sign = 1.0;
    if (s[i] == '+' || s[i] == '-') {
      sign = s[i] == '-' ? -1.0 : 1.0;
      ++i;
    } else if (!first) {
      fail("expected '+' or '-' in field expression '" + text + "'");
    }
    first = false;
    double coef = 1.0;
    bool have_number = false;
    if (i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '.')) {
      auto v = parse_number(s, i);
      if (!v) fail("bad number in field expression '" + text + "'");
      coef = *v;
      have_number = true;
      if (i < s.size() && s[i] == '*') {
        ++i;
        if (i >= s.size() || (s[i] != 'x' && s[i] != 'y'))
          fail("expected x or y after '*' in '" + text + "'");
      }
    }
    if (i < s.size() && (s[i] == 'x' || s[i] == 'y')) {
      (s[i] == 'x' ? e.bx : e.by) += sign * coef;
      ++i;
    } else if (have_number) {
      e.a += sign * coef;
    } else {
      fail("unsupported field expression '" + text + "' (constants and affine forms only)");
    }
  }
  if (e.bx == 0.0 && e.by == 0.0 && text.find_first_of("xy") == std::string::npos) {
    e.kind = Kind::kConstant;
    e.text.clear();
  }
  return e;
}

ScalarField FieldExpr::realize(const GridPtr& grid, const std::filesystem::path& base_dir) const {
  switch (kind) {
    case Kind::kConstant:
      return ScalarField::constant(grid, a);
    case Kind::kAffine:
      if (grid->dim() == 1 && by != 0.0) fail("'" + text + "' uses y on a 1D domain");
      return ScalarField::sample(grid, [&](double x, double y) { return a + bx * x + by * y; });
    case Kind::kFile: {
      std::filesystem::path path(text);
      if (path.is_relative()) path = base_dir / path;
      ScalarField f = read_field_file(path);
      if (!(f.grid() == *grid)) fail("field file " + text + " is on a different grid");
      return ScalarField(grid, std::vector<double>(f.values().begin(), f.values().end()));
    }
  }
  fail("unreachable field kind");
}

json FieldExpr::to_json() const {
  if (kind == Kind::kConstant) return a;
  return text;
}

FieldExpr FieldExpr::from_json(const json& j) {
  if (j.is_number()) return constant(j.get<double>());
  if (j.is_string()) return parse(j.get<std::string>());
  fail("a field must be a number, an affine string or a field-file path");
}

json RunConfig::to_json() const {
  json p = json::array();
  for (const auto& e : phi.p) p.push_back(e.to_json());
  json phi_j = {{"tag", pxbih::to_string(phi.tag)},
                {"p", phi.p.size() == 1 ? p[0] : p},
                {"V", phi.potential ? phi.potential->to_json() : json(nullptr)},
                {"log_weight", phi.log_weight},
                {"c", phi.c},
                {"b", phi.b ? json(*phi.b) : json(nullptr)},
                {"components", json::array({pxbih::to_string(phi.first), pxbih::to_string(phi.second)})}};
  if (phi.p.empty()) phi_j["p"] = nullptr;
  json solve_j = {{"lambdas", solve.lambdas},
                  {"eps", {{"initial", solve.eps_initial},
                           {"decay", solve.eps_decay},
                           {"floor", solve.eps_floor}}},
                  {"method", solve.method},
                  {"gradient_tol", solve.gradient_tol},
                  {"energy_tol", solve.energy_tol},
                  {"stall_window", solve.stall_window},
                  {"max_iterations", solve.max_iterations},
                  {"armijo", solve.armijo},
                  {"backtrack", solve.backtrack},
                  {"residual_tol", solve.residual_tol},
                  {"parallel", solve.parallel}};
  return {{"domain", {{"dim", domain.dim}, {"extents", domain.extents}, {"counts", domain.counts}}},
          {"exponents", {{"p", exponents.p.to_json()},
                         {"q", exponents.q.to_json()},
                         {"r", exponents.r.to_json()},
                         {"space_dim", exponent_or_null(exponents.space_dim)}}},
          {"phi", phi_j},
          {"solve", solve_j},
          {"verify", {{"hypothesis_samples", verify.hypothesis_samples},
                      {"holder_samples", verify.holder_samples},
                      {"relation_samples", verify.relation_samples},
                      {"sequences", verify.sequences},
                      {"simon_samples", verify.simon_samples},
                      {"simon_dim", verify.simon_dim}}},
          {"valley", {{"t_min", valley.t_min}, {"t_max", valley.t_max}, {"t_points", valley.t_points}}},
          {"norm", {{"tolerance", norm.tolerance}}},
          {"output", output},
          {"seed", seed}};
}

RunConfig RunConfig::from_json(const json& j, const std::filesystem::path& base_dir) {
  RunConfig c;
  c.base_dir = base_dir;
  Block top(j, "config");

  if (top.has("domain")) {
    Block b(top.raw("domain"), "domain");
    c.domain.dim = b.get("dim", c.domain.dim);
    if (c.domain.dim != 1 && c.domain.dim != 2) fail("domain.dim must be 1 or 2");
    std::vector<double> ext(static_cast<std::size_t>(c.domain.dim), 1.0);
    std::vector<std::size_t> cnt(static_cast<std::size_t>(c.domain.dim), c.domain.dim == 1 ? 201 : 41);
    c.domain.extents = b.get("extents", ext);
    c.domain.counts = b.get("counts", cnt);
    if (c.domain.extents.size() != static_cast<std::size_t>(c.domain.dim) ||
        c.domain.counts.size() != static_cast<std::size_t>(c.domain.dim))
      fail("domain.extents and domain.counts need one entry per axis");
    b.finish();
  }

  if (top.has("exponents")) {
    Block b(top.raw("exponents"), "exponents");
    if (b.has("p")) c.exponents.p = FieldExpr::from_json(b.raw("p"));
    if (b.has("q")) c.exponents.q = FieldExpr::from_json(b.raw("q"));
    if (b.has("r")) c.exponents.r = FieldExpr::from_json(b.raw("r"));
    if (b.has("space_dim") && !b.raw("space_dim").is_null())
      c.exponents.space_dim = b.as<int>(b.raw("space_dim"), "space_dim");
    b.finish();
  }

  if (top.has("phi")) {
    Block b(top.raw("phi"), "phi");
    try {
      c.phi.tag = phi_tag_from_string(b.get<std::string>("tag", "power"));
    } catch (const Error& e) {
      fail(std::string("phi.tag: ") + e.what());
    }
    if (b.has("p")) {
      const json& p = b.raw("p");
      if (p.is_array()) {
        for (const auto& e : p) c.phi.p.push_back(FieldExpr::from_json(e));
      } else if (!p.is_null()) {
        c.phi.p.push_back(FieldExpr::from_json(p));
      }
    }
    if (b.has("V") && !b.raw("V").is_null()) c.phi.potential = FieldExpr::from_json(b.raw("V"));
    c.phi.log_weight = b.get("log_weight", false);
    c.phi.c = b.get("c", 1.0);
    if (b.has("b") && !b.raw("b").is_null()) c.phi.b = b.as<double>(b.raw("b"), "b");
    if (b.has("components")) {
      auto names = b.as<std::vector<std::string>>(b.raw("components"), "components");
      if (names.size() != 2) fail("phi.components needs two family names");
      try {
        c.phi.first = phi_family_from_string(names[0]);
        c.phi.second = phi_family_from_string(names[1]);
      } catch (const Error& e) {
        fail(std::string("phi.components: ") + e.what());
      }
    }
    b.finish();
    const bool dp = c.phi.tag == PhiTag::kDoublePhase || c.phi.tag == PhiTag::kDoublePhaseLog;
    if (dp && c.phi.p.size() != 2) fail("double-phase phi needs p = [p1, p2]");
    if (!dp && c.phi.p.size() > 1) fail("phi.p takes a list only for double-phase tags");
    if (!dp && (c.phi.potential || c.phi.log_weight)) fail("V and log_weight are double-phase options");
    if (dp && !c.phi.potential) c.phi.potential = FieldExpr::constant(1.0);
    if (c.phi.tag == PhiTag::kDoublePhaseLog) c.phi.log_weight = true;
  }

  if (top.has("solve")) {
    Block b(top.raw("solve"), "solve");
    if (b.has("lambda") && b.has("lambdas")) fail("give solve.lambda or solve.lambdas, not both");
    if (b.has("lambda")) c.solve.lambdas = {b.as<double>(b.raw("lambda"), "lambda")};
    if (b.has("lambdas")) c.solve.lambdas = b.as<std::vector<double>>(b.raw("lambdas"), "lambdas");
    if (c.solve.lambdas.empty()) fail("solve.lambdas is empty");
    if (std::adjacent_find(c.solve.lambdas.begin(), c.solve.lambdas.end(),
                           std::greater_equal<double>()) != c.solve.lambdas.end())
      fail("solve.lambdas must be strictly ascending");
    if (b.has("eps")) {
      Block e(b.raw("eps"), "solve.eps");
      c.solve.eps_initial = e.get("initial", c.solve.eps_initial);
      c.solve.eps_decay = e.get("decay", c.solve.eps_decay);
      c.solve.eps_floor = e.get("floor", c.solve.eps_floor);
      e.finish();
    }
    c.solve.method = b.get<std::string>("method", c.solve.method);
    if (c.solve.method != "newton" && c.solve.method != "gradient")
      fail("solve.method must be \"newton\" or \"gradient\"");
    c.solve.gradient_tol = b.get("gradient_tol", c.solve.gradient_tol);
    c.solve.energy_tol = b.get("energy_tol", c.solve.energy_tol);
    c.solve.stall_window = b.get("stall_window", c.solve.stall_window);
    c.solve.max_iterations = b.get("max_iterations", c.solve.max_iterations);
    c.solve.armijo = b.get("armijo", c.solve.armijo);
    c.solve.backtrack = b.get("backtrack", c.solve.backtrack);
    c.solve.residual_tol = b.get("residual_tol", c.solve.residual_tol);
    c.solve.parallel = b.get("parallel", c.solve.parallel);
    b.finish();
  }

  if (top.has("verify")) {
    Block b(top.raw("verify"), "verify");
    auto& v = c.verify;
    v.hypothesis_samples = b.get("hypothesis_samples", v.hypothesis_samples);
    v.holder_samples = b.get("holder_samples", v.holder_samples);
    v.relation_samples = b.get("relation_samples", v.relation_samples);
    v.sequences = b.get("sequences", v.sequences);
    v.simon_samples = b.get("simon_samples", v.simon_samples);
    v.simon_dim = b.get("simon_dim", v.simon_dim);
    if (v.hypothesis_samples < 1) fail("verify.hypothesis_samples must be positive");
    if (v.simon_dim < 1) fail("verify.simon_dim must be positive");
    b.finish();
  }

  if (top.has("valley")) {
    Block b(top.raw("valley"), "valley");
    c.valley.t_min = b.get("t_min", c.valley.t_min);
    c.valley.t_max = b.get("t_max", c.valley.t_max);
    c.valley.t_points = b.get("t_points", c.valley.t_points);
    if (!(c.valley.t_min > 0.0 && c.valley.t_max > c.valley.t_min) || c.valley.t_points < 2)
      fail("valley needs 0 < t_min < t_max and t_points >= 2");
    b.finish();
  }

  if (top.has("norm")) {
    Block b(top.raw("norm"), "norm");
    c.norm.tolerance = b.get("tolerance", c.norm.tolerance);
    if (!(c.norm.tolerance > 0.0)) fail("norm.tolerance must be positive");
    b.finish();
  }

  c.output = top.get<std::string>("output", c.output);
  c.seed = top.get<std::uint64_t>("seed", c.seed);
  top.finish();
  return c;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open config " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    fail(path.string() + ": " + e.what());
  }
  return from_json(j, path.has_parent_path() ? path.parent_path() : std::filesystem::path("."));
}

GridPtr RunConfig::make_grid() const {
  try {
    return std::make_shared<const Grid>(domain.dim, domain.counts, domain.extents);
  } catch (const Error& e) {
    fail(std::string("domain: ") + e.what());
  }
}

std::vector<double> RunConfig::t_grid() const {
  std::vector<double> t(valley.t_points);
  const double l0 = std::log10(valley.t_min), l1 = std::log10(valley.t_max);
  for (std::size_t k = 0; k < t.size(); ++k) {
    t[k] = std::pow(10.0, l0 + (l1 - l0) * static_cast<double>(k) / static_cast<double>(t.size() - 1));
  }
  t.front() = valley.t_min;
  t.back() = valley.t_max;
  return t;
}

ProblemSpec RunConfig::make_problem(double lambda) const {
  GridPtr grid = make_grid();
  ScalarField p = exponents.p.realize(grid, base_dir);
  ExponentTriple triple(p, exponents.q.realize(grid, base_dir), exponents.r.realize(grid, base_dir));

  auto model = [&]() {
    if (phi.tag == PhiTag::kDoublePhase || phi.tag == PhiTag::kDoublePhaseLog) {
      ScalarField p1 = phi.p[0].realize(grid, base_dir);
      if (!(p1 == p)) fail("phi.p[0] must equal exponents.p (it sets the ambient space)");
      return PhiModel::double_phase(std::move(p1), phi.p[1].realize(grid, base_dir),
                                    phi.potential->realize(grid, base_dir), phi.log_weight, phi.c,
                                    phi.b, phi.first, phi.second);
    }
    if (!phi.p.empty() && !(phi.p[0].realize(grid, base_dir) == p))
      fail("phi.p must equal exponents.p");
    return PhiModel::single(phi.tag, p, phi.c, phi.b);
  }();

  SolverOptions opt;
  opt.method = solve.method == "gradient" ? DescentMethod::kGradient : DescentMethod::kNewton;
  opt.gradient_tol = solve.gradient_tol;
  opt.energy_tol = solve.energy_tol;
  opt.stall_window = solve.stall_window;
  opt.max_iterations = solve.max_iterations;
  opt.armijo = solve.armijo;
  opt.backtrack = solve.backtrack;
  opt.residual_tol = solve.residual_tol;

  return ProblemSpec{std::move(triple),
                     std::move(model),
                     lambda,
                     EpsSchedule{solve.eps_initial, solve.eps_decay, solve.eps_floor},
                     opt,
                     InitialGuess::kValleySeed,
                     exponents.space_dim,
                     seed,
                     true};
}

}  // namespace pxbih
