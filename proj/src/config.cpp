#include "vhi/config.hpp"

#include "vhi/examples.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>

namespace vhi::config {

namespace {

void only_keys(const Json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(fmt::format("{}: expected an object", where));
  for (const auto& [key, _] : j.items())
    if (!allowed.count(key)) throw ConfigError(fmt::format("{}: unknown field '{}'", where, key));
}

double number(const Json& j, const std::string& field) {
  if (!j.is_number()) throw ConfigError(fmt::format("field '{}': expected a number", field));
  const double x = j.get<double>();
  if (!std::isfinite(x)) throw ConfigError(fmt::format("field '{}': not finite", field));
  return x;
}

double number_or(const Json& j, const char* key, double fallback, const std::string& where) {
  return j.contains(key) ? number(j.at(key), where + "." + key) : fallback;
}

int integer(const Json& j, const std::string& field) {
  if (!j.is_number_integer()) throw ConfigError(fmt::format("field '{}': expected an integer", field));
  return j.get<int>();
}

/// A number broadcast to `size` entries, or an array of exactly `size` numbers.
Vector vector_field(const Json& j, int size, const std::string& field) {
  if (j.is_number()) return Vector::Constant(size, number(j, field));
  if (!j.is_array()) throw ConfigError(fmt::format("field '{}': expected a number or an array", field));
  if (static_cast<int>(j.size()) != size)
    throw ConfigError(fmt::format("field '{}': expected {} entries, got {}", field, size, j.size()));
  Vector v(size);
  for (int i = 0; i < size; ++i) v(i) = number(j[static_cast<std::size_t>(i)], fmt::format("{}[{}]", field, i));
  return v;
}

Vector free_vector(const Json& j, const std::string& field) {
  if (j.is_number()) return make_vector({number(j, field)});
  if (!j.is_array() || j.empty()) throw ConfigError(fmt::format("field '{}': expected a number or nonempty array", field));
  return vector_field(j, static_cast<int>(j.size()), field);
}

Json vector_json(const Vector& v) {
  Json a = Json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

contact::ScalarLaw law_field(const Json& j, bool compliance, const std::string& field) {
  only_keys(j, {"law", "params"}, field);
  if (!j.contains("law") || !j.at("law").is_string()) throw ConfigError(fmt::format("field '{}.law': expected a name", field));
  std::vector<double> params;
  if (j.contains("params")) {
    if (!j.at("params").is_array()) throw ConfigError(fmt::format("field '{}.params': expected an array", field));
    for (std::size_t i = 0; i < j.at("params").size(); ++i)
      params.push_back(number(j.at("params")[i], fmt::format("{}.params[{}]", field, i)));
  }
  try {
    return compliance ? contact::compliance_law(j.at("law").get<std::string>(), params)
                      : contact::friction_law(j.at("law").get<std::string>(), params);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(fmt::format("field '{}': {}", field, e.what()));
  }
}

Json law_json(const contact::ScalarLaw& law) { return Json{{"law", law.name}, {"params", law.params}}; }

contact::StrainSet strain_field(const Json& j) {
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string())
    throw ConfigError("field 'contact.B': expected an object with a 'kind'");
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "whole") {
    only_keys(j, {"kind"}, "contact.B");
    return contact::StrainSet::whole();
  }
  if (kind == "box") {
    only_keys(j, {"kind", "lo", "hi"}, "contact.B");
    return contact::StrainSet::box(number(j.at("lo"), "contact.B.lo"), number(j.at("hi"), "contact.B.hi"));
  }
  if (kind == "ball") {
    only_keys(j, {"kind", "radius"}, "contact.B");
    return contact::StrainSet::ball(number(j.at("radius"), "contact.B.radius"));
  }
  throw ConfigError(fmt::format("field 'contact.B.kind': unknown kind '{}'", kind));
}

Json strain_json(const contact::StrainSet& B) {
  switch (B.kind) {
    case contact::StrainSet::Kind::Whole: return Json{{"kind", "whole"}};
    case contact::StrainSet::Kind::Box: return Json{{"kind", "box"}, {"lo", B.lo}, {"hi", B.hi}};
    case contact::StrainSet::Kind::Ball: return Json{{"kind", "ball"}, {"radius", B.radius}};
  }
  return {};
}

const std::string& problem_name(const Json& cfg) {
  if (!cfg.is_object() || !cfg.contains("problem") || !cfg.at("problem").is_string())
    throw ConfigError("field 'problem': expected a registry name");
  return cfg.at("problem").get_ref<const std::string&>();
}

}  // namespace

std::vector<std::string> registry_names() {
  return {"identity", "example1", "example2", "mono2", "contact", "contact-degenerate"};
}

contact::ContactModel default_contact_model() {
  auto m = contact::make_model(3, 1, contact::chain_stiffness(3, 1, 5.0, 10.0), contact::StrainSet::box(-0.2, 0.2),
                               contact::compliance_law("capped", {1.0, 1.0}), contact::friction_law("linear", {0.5}),
                               Vector::Constant(3, 0.05), Vector::Constant(3, 0.3));
  m.f0 = make_vector({1.2, 0.8, 1.5, 0.2, 0.9, -0.05});
  return m;
}

contact::ContactModel degenerate_contact_model() {
  return contact::make_model(1, 1, Matrix::Zero(2, 2), contact::StrainSet::box(-1.0, 1.0),
                             contact::compliance_law("capped", {1.0, 1.0}), contact::friction_law("linear", {0.1}),
                             make_vector({0.5}), make_vector({1.0}));
}

contact::ContactModel model_from_json(const Json& j) {
  only_keys(j, {"nodes", "tangential_dim", "stiffness", "B", "omega", "p", "F", "g", "k", "f0", "f2", "gamma_norm"},
            "contact");
  contact::ContactModel m;
  m.nodes = j.contains("nodes") ? integer(j.at("nodes"), "contact.nodes") : 1;
  m.tangential_dim = j.contains("tangential_dim") ? integer(j.at("tangential_dim"), "contact.tangential_dim") : 1;
  if (m.nodes < 1 || m.nodes > 10000) throw ConfigError("field 'contact.nodes': expected 1..10000");
  if (m.tangential_dim < 1 || m.tangential_dim > 2) throw ConfigError("field 'contact.tangential_dim': expected 1 or 2");
  const int n = m.dim();
  if (j.contains("stiffness")) {
    const auto& s = j.at("stiffness");
    if (s.is_object() && s.contains("matrix")) {
      only_keys(s, {"matrix"}, "contact.stiffness");
      const auto& rows = s.at("matrix");
      if (!rows.is_array() || static_cast<int>(rows.size()) != n)
        throw ConfigError(fmt::format("field 'contact.stiffness.matrix': expected {} rows", n));
      m.stiffness.resize(n, n);
      for (int r = 0; r < n; ++r) {
        const Vector row = vector_field(rows[static_cast<std::size_t>(r)], n, fmt::format("contact.stiffness.matrix[{}]", r));
        m.stiffness.row(r) = row.transpose();
      }
    } else {
      only_keys(s, {"chain", "ground"}, "contact.stiffness");
      m.stiffness = contact::chain_stiffness(m.nodes, m.tangential_dim, number_or(s, "chain", 0.0, "contact.stiffness"),
                                             number_or(s, "ground", 0.0, "contact.stiffness"));
    }
  } else {
    m.stiffness = contact::chain_stiffness(m.nodes, m.tangential_dim, 5.0, 10.0);
  }
  m.B = j.contains("B") ? strain_field(j.at("B")) : contact::StrainSet::whole();
  m.omega = j.contains("omega") ? vector_field(j.at("omega"), n, "contact.omega") : Vector::Ones(n);
  m.p = j.contains("p") ? law_field(j.at("p"), true, "contact.p") : contact::compliance_law("capped", {1.0, 1.0});
  m.F = j.contains("F") ? law_field(j.at("F"), false, "contact.F") : contact::friction_law("linear", {0.5});
  m.g = j.contains("g") ? vector_field(j.at("g"), m.nodes, "contact.g") : Vector::Zero(m.nodes);
  m.k = j.contains("k") ? vector_field(j.at("k"), m.nodes, "contact.k") : Vector::Ones(m.nodes);
  m.f0 = j.contains("f0") ? vector_field(j.at("f0"), n, "contact.f0") : Vector::Zero(n);
  m.f2 = j.contains("f2") ? vector_field(j.at("f2"), n, "contact.f2") : Vector::Zero(n);
  m.gamma_norm = number_or(j, "gamma_norm", 1.0, "contact");
  try {
    m.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return m;
}

Json model_to_json(const contact::ContactModel& m) {
  Json rows = Json::array();
  for (int r = 0; r < m.stiffness.rows(); ++r) rows.push_back(vector_json(m.stiffness.row(r).transpose()));
  return Json{{"nodes", m.nodes},
              {"tangential_dim", m.tangential_dim},
              {"stiffness", Json{{"matrix", rows}}},
              {"B", strain_json(m.B)},
              {"omega", vector_json(m.omega)},
              {"p", law_json(m.p)},
              {"F", law_json(m.F)},
              {"g", vector_json(m.g)},
              {"k", vector_json(m.k)},
              {"f0", vector_json(m.f0)},
              {"f2", vector_json(m.f2)},
              {"gamma_norm", m.gamma_norm}};
}

bool is_contact(const Json& cfg) {
  const auto& name = problem_name(cfg);
  return name == "contact" || name == "contact-degenerate";
}

contact::ContactModel contact_model(const Json& cfg) {
  if (!is_contact(cfg)) throw ConfigError("field 'problem': not a contact model");
  if (cfg.contains("contact")) return model_from_json(cfg.at("contact"));
  return problem_name(cfg) == "contact" ? default_contact_model() : degenerate_contact_model();
}

Json normalize_problem(const Json& cfg) {
  const std::string name = problem_name(cfg);
  if (name == "identity") {
    only_keys(cfg, {"problem", "f"}, "problem config");
    const Vector f = cfg.contains("f") ? free_vector(cfg.at("f"), "f") : make_vector({0.0});
    return Json{{"problem", name}, {"f", vector_json(f)}};
  }
  if (name == "example1" || name == "example2") {
    only_keys(cfg, {"problem", "f", "a"}, "problem config");
    const double a = number_or(cfg, "a", 1.0, "problem config");
    if (!(a > 0.0)) throw ConfigError("field 'a': must be positive");
    return Json{{"problem", name}, {"f", number_or(cfg, "f", 1.0, "problem config")}, {"a", a}};
  }
  if (name == "mono2") {
    only_keys(cfg, {"problem", "f"}, "problem config");
    return Json{{"problem", name}, {"f", number_or(cfg, "f", 1.0, "problem config")}};
  }
  if (name == "contact" || name == "contact-degenerate") {
    only_keys(cfg, {"problem", "contact"}, "problem config");
    return Json{{"problem", name}, {"contact", model_to_json(contact_model(cfg))}};
  }
  throw ConfigError(fmt::format("field 'problem': unknown name '{}'", name));
}

VhiProblem build_problem(const Json& raw) {
  const Json cfg = normalize_problem(raw);
  const std::string name = cfg.at("problem").get<std::string>();
  if (name == "identity") {
    const Vector f = free_vector(cfg.at("f"), "f");
    const int n = static_cast<int>(f.size());
    return VhiProblem("identity", n, ConstraintSet::whole_space(n), OperatorA::scaled_identity(1.0),
                      BiFunctional::zero(n), zero_functional(n), f);
  }
  if (name == "example1") return examples::example1_problem(cfg.at("f").get<double>(), cfg.at("a").get<double>());
  if (name == "example2") return examples::example2_problem(cfg.at("f").get<double>(), cfg.at("a").get<double>());
  if (name == "mono2") return examples::example1_problem(cfg.at("f").get<double>(), 2.0).with_name("mono2");
  if (name == "contact")
    return contact::assemble(model_from_json(cfg.at("contact")), contact::AssembleMode::Strict);
  return contact::assemble(model_from_json(cfg.at("contact")), contact::AssembleMode::Relaxed)
      .with_name("contact-degenerate");
}

Json load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open config file '{}'", path));
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError(fmt::format("config file '{}': {}", path, e.what()));
  }
}

}  // namespace vhi::config
