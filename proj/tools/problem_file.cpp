#include "problem_file.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace gopt::cli {

namespace {

using nlohmann::json;

std::vector<double> parse_weights(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty())
    throw ParseError("problem file: '" + field + ".weights' must be a non-empty array");
  std::vector<double> out;
  for (const auto& x : j) {
    if (!x.is_number()) throw ParseError("problem file: '" + field + ".weights' must be numeric");
    out.push_back(x.get<double>());
  }
  return out;
}

std::vector<Point> parse_points(const json& j, const std::string& field) {
  if (!j.is_array()) throw ParseError("problem file: '" + field + ".points' must be an array");
  std::vector<Point> out;
  for (const auto& row : j) {
    Point pt;
    if (row.is_number()) {
      pt.push_back(row.get<double>());
    } else if (row.is_array()) {
      for (const auto& x : row) {
        if (!x.is_number())
          throw ParseError("problem file: '" + field + ".points' must be numeric");
        pt.push_back(x.get<double>());
      }
    } else {
      throw ParseError("problem file: '" + field + ".points' entries must be numbers or arrays");
    }
    out.push_back(std::move(pt));
  }
  return out;
}

std::vector<double> parse_lambda(const json& j, const std::string& field, std::size_t length) {
  std::vector<double> out;
  if (j.is_number()) {
    out.assign(length, j.get<double>());
  } else if (j.is_array()) {
    for (const auto& x : j) {
      if (!x.is_number()) throw ParseError("problem file: '" + field + "' must be numeric");
      out.push_back(x.get<double>());
    }
    if (out.size() != length)
      throw ParseError("problem file: '" + field + "' has length " + std::to_string(out.size()) +
                       ", expected " + std::to_string(length));
  } else {
    throw ParseError("problem file: '" + field + "' must be a number or an array");
  }
  return out;
}

PenaltyKind parse_penalty(const json& j, const std::string& field) {
  const std::string s = j.get<std::string>();
  if (s == "tv") return PenaltyKind::TV;
  if (s == "ptv") return PenaltyKind::PTV;
  throw ParseError("problem file: '" + field + "' must be \"tv\" or \"ptv\", got \"" + s + "\"");
}

}  // namespace

ProblemFile parse_problem_text(const std::string& text, const std::string& origin) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(origin + ": " + e.what());
  }
  if (!root.is_object()) throw ParseError(origin + ": top level must be an object");

  ProblemFile out;
  if (root.contains("version")) {
    out.version = root["version"].get<int>();
    if (out.version != 1)
      throw ParseError(origin + ": unsupported version " + std::to_string(out.version));
  }

  for (const char* side : {"p", "q"}) {
    if (!root.contains(side) || !root[side].is_object() || !root[side].contains("weights"))
      throw ParseError(origin + ": missing '" + std::string(side) + ".weights'");
    auto weights = parse_weights(root[side]["weights"], side);
    std::optional<std::vector<Point>> points;
    if (root[side].contains("points")) {
      points = parse_points(root[side]["points"], side);
      if (points->size() != weights.size())
        throw ParseError(origin + ": '" + std::string(side) + "' points/weights length mismatch");
    }
    if (side[0] == 'p') {
      out.p_weights = std::move(weights);
      out.p_points = std::move(points);
    } else {
      out.q_weights = std::move(weights);
      out.q_points = std::move(points);
    }
  }

  if (!root.contains("cost") || !root["cost"].is_object())
    throw ParseError(origin + ": missing 'cost' object");
  const json& cost = root["cost"];
  if (cost.contains("matrix") == cost.contains("rule"))
    throw ParseError(origin + ": 'cost' must contain exactly one of 'matrix' or 'rule'");
  if (cost.contains("matrix")) {
    std::vector<std::vector<double>> rows;
    for (const auto& row : cost["matrix"]) {
      std::vector<double> r;
      for (const auto& x : row) r.push_back(x.get<double>());
      rows.push_back(std::move(r));
    }
    if (rows.empty()) throw ParseError(origin + ": 'cost.matrix' is empty");
    try {
      out.cost_matrix = Matrix::from_rows(rows);
    } catch (const std::invalid_argument& e) {
      throw ParseError(origin + ": 'cost.matrix': " + e.what());
    }
    if (out.cost_matrix->rows() != static_cast<int>(out.p_weights.size()) ||
        out.cost_matrix->cols() != static_cast<int>(out.q_weights.size()))
      throw ParseError(origin + ": 'cost.matrix' dimensions do not match the measures");
  } else {
    out.cost_rule = cost["rule"].get<std::string>();
    if (*out.cost_rule != "sq_euclidean")
      throw ParseError(origin + ": unknown cost rule \"" + *out.cost_rule + "\"");
    if (!out.p_points || !out.q_points)
      throw ParseError(origin + ": cost rule \"sq_euclidean\" requires points on both measures");
  }

  if (root.contains("lambda1"))
    out.lambda1 = parse_lambda(root["lambda1"], "lambda1", out.p_weights.size());
  if (root.contains("lambda2"))
    out.lambda2 = parse_lambda(root["lambda2"], "lambda2", out.q_weights.size());
  if (root.contains("penalty1")) out.penalty1 = parse_penalty(root["penalty1"], "penalty1");
  if (root.contains("penalty2")) out.penalty2 = parse_penalty(root["penalty2"], "penalty2");

  if (!root.contains("solver") || !root["solver"].is_string())
    throw ParseError(origin + ": missing 'solver'");
  out.solver = root["solver"].get<std::string>();

  if (root.contains("epsilon")) out.epsilon = root["epsilon"].get<double>();
  if (root.contains("eta")) out.eta = root["eta"].get<double>();
  if (root.contains("alpha")) out.alpha = root["alpha"].get<double>();
  if (root.contains("beta")) out.beta = root["beta"].get<double>();
  if (root.contains("tol")) out.tol = root["tol"].get<double>();
  if (root.contains("max_iters")) out.max_iters = root["max_iters"].get<int>();
  return out;
}

ProblemFile parse_problem_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open problem file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_problem_text(buffer.str(), path);
}

CostMatrix build_cost(const ProblemFile& file) {
  if (file.cost_matrix) {
    try {
      return CostMatrix::from_matrix(*file.cost_matrix);
    } catch (const std::invalid_argument& e) {
      throw ParseError(std::string("problem file: cost: ") + e.what());
    }
  }
  try {
    return make_cost_sq_euclidean(*file.p_points, *file.q_points);
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("problem file: cost rule: ") + e.what());
  }
}

}  // namespace gopt::cli
