#pragma once

// Problem registry and JSON configuration.
//
// A problem configuration is a JSON object with a "problem" name and
// name-specific fields:
//   identity   {"f": [..]}                         A = I, phi = 0, j = 0, K = R^n
//   example1   {"f": 2, "a": 1}                    one-dimensional example with kinks at 1 and 2
//   example2   {"f": 3, "a": 1}                    one-dimensional example, nonconvex for u < 1
//   mono2      {"f": 1}                            example1 with A = 2 I (smallness margin 1)
//   contact    {"contact": {..model..}}            discrete contact model (defaults: 3 nodes)
//   contact-degenerate {"contact": {..}}           zero stiffness, zero loads (1 node)
// Unknown fields are rejected with a message naming them.

#include "vhi/contact.hpp"
#include "vhi/problem.hpp"

#include <json.hpp>

#include <stdexcept>
#include <string>
#include <vector>

namespace vhi::config {

using Json = nlohmann::json;

class ConfigError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

std::vector<std::string> registry_names();

/// Fills defaults so that the returned object fully determines the problem.
/// Throws ConfigError naming the offending field.
Json normalize_problem(const Json& cfg);
/// Builds the problem from a (normalized or raw) configuration.
VhiProblem build_problem(const Json& cfg);

/// True for the registry entries backed by a contact model.
bool is_contact(const Json& cfg);
contact::ContactModel contact_model(const Json& cfg);

contact::ContactModel model_from_json(const Json& j);
Json model_to_json(const contact::ContactModel& m);

/// Three-node chain used by the contact studies.
contact::ContactModel default_contact_model();
/// One node, zero stiffness, B = [-1, 1], g = 0.5, k = 1.
contact::ContactModel degenerate_contact_model();

/// Reads and parses a JSON file. Throws ConfigError.
Json load_file(const std::string& path);

}  // namespace vhi::config
