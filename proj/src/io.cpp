#include "mtcrit/io.hpp"

#include <openssl/evp.h>

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "mtcrit/error.hpp"

namespace mtc {

namespace {
const Json& field(const Json& j, const std::string& key) {
  if (!j.is_object()) throw ConfigError("expected an object around field '" + key + "'");
  return j.at(key);
}
}  // namespace

double get_number(const Json& j, const std::string& key, double fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  return require_number(j, key);
}

double require_number(const Json& j, const std::string& key) {
  if (!j.is_object() || !j.contains(key)) throw ConfigError("missing field '" + key + "'");
  const Json& v = field(j, key);
  if (!v.is_number()) throw ConfigError("field '" + key + "' must be a number");
  return v.get<double>();
}

int get_int(const Json& j, const std::string& key, int fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  const Json& v = j.at(key);
  if (!v.is_number_integer()) throw ConfigError("field '" + key + "' must be an integer");
  return v.get<int>();
}

std::vector<double> get_numbers(const Json& j, const std::string& key, const std::vector<double>& fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  const Json& v = j.at(key);
  if (!v.is_array()) throw ConfigError("field '" + key + "' must be an array of numbers");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) throw ConfigError("field '" + key + "' must be an array of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

AsymptoticData asymptotics_from_json(const Json& j) {
  AsymptoticData d;
  auto terms = [&](const std::string& key) {
    std::vector<LogPowerTerm> out;
    if (!j.contains(key)) return out;
    const Json& arr = j.at(key);
    if (!arr.is_array()) throw ConfigError("field '" + key + "' must be an array of [coef, p, q]");
    for (const auto& t : arr) {
      if (!t.is_array() || t.size() != 3 || !t[0].is_number() || !t[1].is_number() || !t[2].is_number())
        throw ConfigError("field '" + key + "' entries must be [coef, p, q]");
      out.push_back({t[0].get<double>(), t[1].get<double>(), t[2].get<double>()});
    }
    return out;
  };
  d.A_terms = terms("A_terms");
  d.B_terms = terms("B_terms");
  d.kappa = get_number(j, "kappa", 1.0);
  d.eps_tilde0 = get_number(j, "eps_tilde0", 1.0);
  return d;
}

Json asymptotics_to_json(const AsymptoticData& d) {
  Json j;
  auto terms = [](const std::vector<LogPowerTerm>& v) {
    Json a = Json::array();
    for (const auto& t : v) a.push_back({t.coef, t.p, t.q});
    return a;
  };
  j["A_terms"] = terms(d.A_terms);
  j["B_terms"] = terms(d.B_terms);
  j["kappa"] = d.kappa;
  j["eps_tilde0"] = d.eps_tilde0;
  return j;
}

Perturbation family_from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("field 'family' must be an object");
  if (!j.contains("kind") || !j.at("kind").is_string()) throw ConfigError("field 'family.kind' must be a string");
  const std::string kind = j.at("kind").get<std::string>();
  Perturbation fam = Perturbation::zero();
  if (kind == "Zero" || kind == "zero") {
    fam = Perturbation::zero(get_number(j, "g0", 0.0));
  } else if (kind == "PowerLog" || kind == "power_log") {
    PowerLogParams p;
    p.c = get_number(j, "c", p.c);
    p.a = get_number(j, "a", p.a);
    p.b = get_number(j, "b", p.b);
    p.c_prime = get_number(j, "c_prime", p.c_prime);
    p.a_prime = get_number(j, "a_prime", p.a_prime);
    p.b_prime = get_number(j, "b_prime", p.b_prime);
    p.R_prime = get_number(j, "R_prime", p.R_prime);
    p.g0 = get_number(j, "g0", p.g0);
    fam = Perturbation::power_log(p);
  } else if (kind == "Tabulated" || kind == "tabulated") {
    if (!j.contains("knots") || !j.at("knots").is_array()) throw ConfigError("field 'family.knots' must be an array");
    std::vector<Knot> knots;
    for (const auto& k : j.at("knots")) {
      if (!k.is_array() || k.size() != 3) throw ConfigError("field 'family.knots' entries must be [t, g, dg]");
      knots.push_back({k[0].get<double>(), k[1].get<double>(), k[2].get<double>()});
    }
    fam = Perturbation::tabulated(knots);
  } else {
    throw ConfigError("field 'family.kind' must be Zero, PowerLog or Tabulated");
  }
  if (j.contains("asymptotics")) fam.user_asymptotics = asymptotics_from_json(j.at("asymptotics"));
  return fam;
}

Json family_to_json(const Perturbation& fam) {
  Json j;
  switch (fam.kind()) {
    case FamilyKind::Zero:
      j["kind"] = "Zero";
      j["g0"] = fam.g0();
      break;
    case FamilyKind::PowerLog: {
      const auto& p = fam.params();
      j["kind"] = "PowerLog";
      j["c"] = p.c;
      j["a"] = p.a;
      j["b"] = p.b;
      j["c_prime"] = p.c_prime;
      j["a_prime"] = p.a_prime;
      j["b_prime"] = p.b_prime;
      j["R_prime"] = p.R_prime;
      j["g0"] = p.g0;
      break;
    }
    case FamilyKind::Tabulated: {
      j["kind"] = "Tabulated";
      Json k = Json::array();
      for (const auto& kn : fam.knots()) k.push_back({kn.t, kn.g, kn.dg});
      j["knots"] = k;
      break;
    }
  }
  if (fam.user_asymptotics) j["asymptotics"] = asymptotics_to_json(*fam.user_asymptotics);
  return j;
}

DomainSpec domain_from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("field 'domain' must be an object");
  DomainSpec d;
  if (j.contains("shape")) {
    if (!j.at("shape").is_string()) throw ConfigError("field 'domain.shape' must be a string");
    d.shape = parse_shape(j.at("shape").get<std::string>());
  }
  d.width = get_number(j, "width", d.width);
  d.height = get_number(j, "height", d.height);
  d.quad_order = get_int(j, "quad_order", d.quad_order);
  d.image_layers = get_int(j, "image_layers", d.image_layers);
  if (!(d.width > 0 && d.height > 0)) throw ConfigError("field 'domain.width'/'domain.height' must be positive");
  if (d.quad_order < 2) throw ConfigError("field 'domain.quad_order' must be >= 2");
  return d;
}

Json domain_to_json(const DomainSpec& d) {
  Json j;
  j["shape"] = shape_name(d.shape);
  if (d.shape == Shape::Rectangle) {
    j["width"] = d.width;
    j["height"] = d.height;
  }
  j["quad_order"] = d.quad_order;
  j["image_layers"] = d.image_layers;
  return j;
}

std::string config_hash(const Json& config) {
  const std::string s = config.dump();
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(s.data(), s.size(), md, &len, EVP_sha256(), nullptr);
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return os.str();
}

Json parse_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON in '") + path + "': " + e.what());
  }
}

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << j.dump(2) << "\n";
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << "\n";
  char buf[64];
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", r[i]);
      out << (i ? "," : "") << buf;
    }
    out << "\n";
  }
}

}  // namespace mtc
