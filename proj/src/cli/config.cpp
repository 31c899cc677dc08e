#include "bergman/cli/config.hpp"

#include <fstream>
#include <set>
#include <type_traits>

#include "bergman/poly_io.hpp"
#include "bergman/rational.hpp"

namespace bergman::cli {

namespace {

using nlohmann::json;

template <class T>
bool accepts(const json& v) {
  if constexpr (std::is_same_v<T, bool>) {
    return v.is_boolean();
  } else if constexpr (std::is_same_v<T, std::string>) {
    return v.is_string();
  } else if constexpr (std::is_floating_point_v<T>) {
    return v.is_number();
  } else if constexpr (std::is_unsigned_v<T>) {
    return v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0);
  } else if constexpr (std::is_integral_v<T>) {
    return v.is_number_integer();
  } else {
    // std::vector<E>
    if (!v.is_array()) return false;
    for (const auto& e : v) {
      if (!accepts<typename T::value_type>(e)) return false;
    }
    return true;
  }
}

template <class T>
const char* type_name() {
  if constexpr (std::is_same_v<T, bool>) return "a boolean";
  else if constexpr (std::is_same_v<T, std::string>) return "a string";
  else if constexpr (std::is_floating_point_v<T>) return "a number";
  else if constexpr (std::is_unsigned_v<T>) return "a non-negative integer";
  else if constexpr (std::is_integral_v<T>) return "an integer";
  else return "an array";
}

/// Reads the keys of one JSON object and rejects anything it did not read.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
  }

  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  bool has(const std::string& key) const { return j_.contains(key); }

  template <class T>
  void get(const std::string& key, T& out) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    const json& v = j_.at(key);
    if (!accepts<T>(v)) throw ConfigError(field(key), std::string("expected ") + type_name<T>());
    out = v.get<T>();
  }

  template <class T>
  void get(const std::string& key, std::optional<T>& out) {
    seen_.insert(key);
    if (!j_.contains(key) || j_.at(key).is_null()) return;
    T value{};
    get(key, value);
    out = value;
  }

  Section child(const std::string& key) {
    seen_.insert(key);
    static const json empty = json::object();
    return Section(j_.contains(key) ? j_.at(key) : empty, field(key));
  }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!seen_.count(key)) throw ConfigError(field(key), "unknown field");
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

void require(bool ok, const std::string& field, const std::string& message) {
  if (!ok) throw ConfigError(field, message);
}

/// FNV-1a, so claim seeds do not depend on the order claims are listed in.
std::uint64_t name_hash(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) h = (h ^ c) * 0x100000001b3ULL;
  return h;
}

}  // namespace

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::verify: return "verify";
    case ExperimentKind::commutator: return "commutator";
    case ExperimentKind::cover: return "cover";
    case ExperimentKind::constants: return "constants";
  }
  return "verify";
}

ExperimentKind parse_kind(const std::string& name) {
  for (auto k : {ExperimentKind::verify, ExperimentKind::commutator, ExperimentKind::cover, ExperimentKind::constants}) {
    if (to_string(k) == name) return k;
  }
  throw ConfigError("experiment", "unknown experiment '" + name + "'");
}

const std::vector<std::string>& verify_claims() {
  static const std::vector<std::string> claims{
      "commutator_series_identity", "number_operator_weight_bounds", "shell_radial_bound",
      "shell_tangential_bound",     "shell_partial_bound",           "series_term_bound",
      "shell_mass_bound",           "dilation_bound",                "circle_derivative_bound",
      "radial_tangential_identity", "radial_power_coefficients",     "box_distortion"};
  return claims;
}

void ExperimentConfig::normalize() {
  require(schema_version == kSchemaVersion, "schema_version", "unsupported version " + std::to_string(schema_version));
  require(n >= 1 && n <= 8, "n", "must lie in 1..8");
  require(threads >= 1, "threads", "must be at least 1");

  auto& p = polynomial;
  if (p.literal) {
    try {
      parse_poly(*p.literal, n);
    } catch (const std::exception& e) {
      throw ConfigError("polynomial.literal", e.what());
    }
  } else {
    require(p.degree >= 0, "polynomial.degree", "must be non-negative");
    require(p.min_degree >= 0 && p.min_degree <= p.degree, "polynomial.min_degree", "must lie in 0..degree");
    require(p.density > 0 && p.density <= 1, "polynomial.density", "must lie in (0, 1]");
    if (!p.seed) p.seed = derive_seed(seed, name_hash("polynomial"));
  }

  auto& v = verify;
  if (v.claims.empty()) v.claims = verify_claims();
  for (const auto& c : v.claims) {
    bool known = false;
    for (const auto& k : verify_claims()) known = known || k == c;
    require(known, "verify.claims", "unknown claim '" + c + "'");
  }
  require(v.max_degree >= 0, "verify.max_degree", "must be non-negative");
  require(v.k_max >= 0, "verify.k_max", "must be non-negative");
  require(v.t_max >= 0, "verify.t_max", "must be non-negative");
  require(v.series_terms >= 1, "verify.series_terms", "must be at least 1");
  require(v.f_degree >= 0, "verify.f_degree", "must be non-negative");
  require(v.series_constant > 0, "verify.series_constant", "must be positive");
  require(v.max_radial_order >= 0, "verify.max_radial_order", "must be non-negative");
  for (const auto& r : v.dilation_radii) {
    Rational q;
    try {
      q = parse_rational(r);
    } catch (const std::exception&) {
      throw ConfigError("verify.dilation_radii", "not a rational: '" + r + "'");
    }
    require(q > make_rational(1, 2) && q < Rational(1), "verify.dilation_radii", "radii must lie in (1/2, 1)");
  }
  for (double r : v.disk_radii) require(r > 0 && r <= 1, "verify.disk_radii", "radii must lie in (0, 1]");
  require(v.cover_r > 0.25 && v.cover_r < 1, "verify.cover_r", "must lie in (1/4, 1)");
  require(v.cover_c > 0 && v.cover_c < std::min((v.cover_r - 0.25) / 4, 0.1), "verify.cover_c",
          "must satisfy 0 < c < min((r - 1/4)/4, 1/10)");

  auto& m = commutator;
  require(!m.B.empty(), "commutator.B", "needs at least one truncation degree");
  for (int b : m.B) require(b >= 0, "commutator.B", "degrees must be non-negative");
  require(m.l >= 0, "commutator.l", "must be non-negative");
  require(m.t >= 0, "commutator.t", "must be non-negative");
  require(m.i >= 1 && m.i <= n, "commutator.i", "must lie in 1..n");
  require(m.j >= 1 && m.j <= n, "commutator.j", "must lie in 1..n");
  for (double q : m.schatten) require(q >= 1, "commutator.schatten", "exponents must be at least 1");
  require(m.matrix_format == "none" || m.matrix_format == "csv" || m.matrix_format == "binary",
          "commutator.matrix_format", "must be none, csv or binary");

  auto& cv = cover;
  require(cv.samples >= 1, "cover.samples", "must be at least 1");
  require(cv.r > 0.25 && cv.r < 1, "cover.r", "must lie in (1/4, 1)");
  require(cv.c > 0 && cv.c < std::min((cv.r - 0.25) / 4, 0.1), "cover.c", "must satisfy 0 < c < min((r - 1/4)/4, 1/10)");
  require(cv.shrink > 0, "cover.shrink", "must be positive");
  require(cv.dilate > 0, "cover.dilate", "must be positive");
  if (!cv.seed) cv.seed = derive_seed(seed, name_hash("cover"));

  auto& k = constants;
  require(!k.degrees.empty(), "constants.degrees", "needs at least one degree");
  for (int d : k.degrees) require(d >= 1, "constants.degrees", "degrees must be at least 1");
  require(k.trials >= 1, "constants.trials", "must be at least 1");
  require(k.k_max >= 0, "constants.k_max", "must be non-negative");
  require(k.f_max_degree >= 0, "constants.f_max_degree", "must be non-negative");
  require(k.form == "shell_integral" || k.form == "weighted_norm", "constants.form",
          "must be shell_integral or weighted_norm");

  require(!output.prefix.empty(), "output.prefix", "must not be empty");
}

ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig c;
  Section root(j, "");
  root.get("schema_version", c.schema_version);
  if (root.has("experiment")) {
    std::string kind;
    root.get("experiment", kind);
    c.kind = parse_kind(kind);
  }
  root.get("n", c.n);
  root.get("seed", c.seed);
  root.get("threads", c.threads);

  {
    auto s = root.child("polynomial");
    s.get("literal", c.polynomial.literal);
    s.get("degree", c.polynomial.degree);
    std::string support = c.polynomial.support == SupportModel::dense ? "dense" : "sparse";
    s.get("support", support);
    require(support == "dense" || support == "sparse", s.field("support"), "must be dense or sparse");
    c.polynomial.support = support == "dense" ? SupportModel::dense : SupportModel::sparse;
    s.get("density", c.polynomial.density);
    s.get("min_degree", c.polynomial.min_degree);
    s.get("seed", c.polynomial.seed);
    s.finish();
  }
  {
    auto s = root.child("verify");
    auto& v = c.verify;
    s.get("claims", v.claims);
    s.get("max_degree", v.max_degree);
    s.get("k_max", v.k_max);
    s.get("t_max", v.t_max);
    s.get("series_terms", v.series_terms);
    s.get("trials", v.trials);
    s.get("f_degree", v.f_degree);
    s.get("series_constant", v.series_constant);
    s.get("dilation_radii", v.dilation_radii);
    s.get("disk_radii", v.disk_radii);
    s.get("max_radial_order", v.max_radial_order);
    s.get("pairs", v.pairs);
    s.get("probes", v.probes);
    s.get("cover_c", v.cover_c);
    s.get("cover_r", v.cover_r);
    s.get("identity_points", v.identity_points);
    s.finish();
  }
  {
    auto s = root.child("commutator");
    auto& m = c.commutator;
    s.get("B", m.B);
    s.get("l", m.l);
    s.get("t", m.t);
    s.get("i", m.i);
    s.get("j", m.j);
    s.get("schatten", m.schatten);
    s.get("top_k", m.top_k);
    s.get("stabilization_tolerance", m.stabilization_tolerance);
    s.get("matrix_format", m.matrix_format);
    s.finish();
  }
  {
    auto s = root.child("cover");
    auto& cv = c.cover;
    s.get("samples", cv.samples);
    s.get("r", cv.r);
    s.get("c", cv.c);
    s.get("shrink", cv.shrink);
    s.get("dilate", cv.dilate);
    s.get("probes", cv.probes);
    s.get("seed", cv.seed);
    s.finish();
  }
  {
    auto s = root.child("constants");
    auto& k = c.constants;
    s.get("degrees", k.degrees);
    s.get("trials", k.trials);
    s.get("k_max", k.k_max);
    s.get("f_max_degree", k.f_max_degree);
    s.get("form", k.form);
    s.finish();
  }
  {
    auto s = root.child("output");
    s.get("dir", c.output.dir);
    s.get("prefix", c.output.prefix);
    s.finish();
  }
  root.finish();
  return c;
}

json config_to_json(const ExperimentConfig& c) {
  json poly = json::object();
  if (c.polynomial.literal) {
    poly["literal"] = *c.polynomial.literal;
  } else {
    poly = {{"degree", c.polynomial.degree},
            {"support", c.polynomial.support == SupportModel::dense ? "dense" : "sparse"},
            {"density", c.polynomial.density},
            {"min_degree", c.polynomial.min_degree}};
    if (c.polynomial.seed) poly["seed"] = *c.polynomial.seed;
  }
  const auto& v = c.verify;
  const auto& m = c.commutator;
  json cover = {{"samples", c.cover.samples}, {"r", c.cover.r},           {"c", c.cover.c},
                {"shrink", c.cover.shrink},   {"dilate", c.cover.dilate}, {"probes", c.cover.probes}};
  if (c.cover.seed) cover["seed"] = *c.cover.seed;
  return {{"schema_version", c.schema_version},
          {"experiment", to_string(c.kind)},
          {"n", c.n},
          {"seed", c.seed},
          {"threads", c.threads},
          {"polynomial", poly},
          {"verify",
           {{"claims", v.claims},
            {"max_degree", v.max_degree},
            {"k_max", v.k_max},
            {"t_max", v.t_max},
            {"series_terms", v.series_terms},
            {"trials", v.trials},
            {"f_degree", v.f_degree},
            {"series_constant", v.series_constant},
            {"dilation_radii", v.dilation_radii},
            {"disk_radii", v.disk_radii},
            {"max_radial_order", v.max_radial_order},
            {"pairs", v.pairs},
            {"probes", v.probes},
            {"cover_c", v.cover_c},
            {"cover_r", v.cover_r},
            {"identity_points", v.identity_points}}},
          {"commutator",
           {{"B", m.B},
            {"l", m.l},
            {"t", m.t},
            {"i", m.i},
            {"j", m.j},
            {"schatten", m.schatten},
            {"top_k", m.top_k},
            {"stabilization_tolerance", m.stabilization_tolerance},
            {"matrix_format", m.matrix_format}}},
          {"cover", cover},
          {"constants",
           {{"degrees", c.constants.degrees},
            {"trials", c.constants.trials},
            {"k_max", c.constants.k_max},
            {"f_max_degree", c.constants.f_max_degree},
            {"form", c.constants.form}}},
          {"output", {{"dir", c.output.dir}, {"prefix", c.output.prefix}}}};
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("config", std::string("invalid JSON: ") + e.what());
  }
  return config_from_json(j);
}

}  // namespace bergman::cli
