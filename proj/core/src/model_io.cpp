#include "mbrisk/model_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mbrisk/error.hpp"

namespace mbrisk {
namespace {

using nlohmann::json;

std::size_t parse_claim_key(const std::string& key) {
  std::size_t value = 0;
  const char* first = key.data();
  const char* last = key.data() + key.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (key.empty() || ec != std::errc{} || ptr != last) {
    throw ValidationError("claim size key \"" + key + "\" is not a non-negative integer");
  }
  return value;
}

double as_number(const json& v, const std::string& where) {
  if (!v.is_number()) throw ValidationError(where + ": expected a number");
  return v.get<double>();
}

Matrix parse_matrix(const json& node, std::size_t n, const std::string& where) {
  const auto d = static_cast<Eigen::Index>(n);
  Matrix out(d, d);
  if (!node.is_array()) throw ValidationError(where + ": expected an array");
  if (!node.empty() && !node.front().is_array()) {
    if (node.size() != n * n) throw ValidationError(where + ": expected " + std::to_string(n * n) + " entries");
    for (std::size_t k = 0; k < n * n; ++k) {
      out(static_cast<Eigen::Index>(k / n), static_cast<Eigen::Index>(k % n)) = as_number(node[k], where);
    }
    return out;
  }
  if (node.size() != n) {
    throw ValidationError(where + ": expected " + std::to_string(n) + " rows");
  }
  for (std::size_t i = 0; i < n; ++i) {
    const json& row = node[i];
    if (!row.is_array() || row.size() != n) {
      throw ValidationError(where + ": row " + std::to_string(i) + " must have " + std::to_string(n) + " entries");
    }
    for (std::size_t j = 0; j < n; ++j) {
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = as_number(row[j], where);
    }
  }
  return out;
}

}  // namespace

ModelSpec parse_model(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("model file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ValidationError("model file must be a JSON object");
  for (const auto& [key, _] : doc.items()) {
    if (key != "states" && key != "claims" && key != "initial") {
      throw ValidationError("unknown model field \"" + key + "\"");
    }
  }

  ModelSpec spec;
  const auto states = doc.find("states");
  if (states == doc.end() || !states->is_number_integer() || states->get<long long>() <= 0) {
    throw ValidationError("\"states\" must be a positive integer");
  }
  spec.n_states = states->get<std::size_t>();

  const auto claims = doc.find("claims");
  if (claims == doc.end() || !claims->is_object()) {
    throw ValidationError("\"claims\" must be an object mapping claim size to matrix");
  }
  spec.claims = MatrixSeq(spec.n_states);
  for (const auto& [key, value] : claims->items()) {
    const std::size_t m = parse_claim_key(key);
    spec.claims.set(m, parse_matrix(value, spec.n_states, "claims[\"" + key + "\"]"));
  }

  const auto initial = doc.find("initial");
  if (initial == doc.end() || (initial->is_string() && initial->get<std::string>() == "stationary")) {
    spec.initial = Stationary{};
  } else if (initial->is_array()) {
    std::vector<double> probs;
    for (const auto& v : *initial) probs.push_back(as_number(v, "initial"));
    spec.initial = std::move(probs);
  } else {
    throw ValidationError("\"initial\" must be \"stationary\" or a probability vector");
  }
  return spec;
}

ModelSpec load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read model file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("cannot read model file " + path.string());
  return parse_model(buf.str());
}

std::string dump_model(const ModelSpec& spec) {
  json doc;
  doc["states"] = spec.n_states;
  json claims = json::object();
  for (const auto& [m, mat] : spec.claims.entries()) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < mat.rows(); ++i) {
      json row = json::array();
      for (Eigen::Index j = 0; j < mat.cols(); ++j) row.push_back(mat(i, j));
      rows.push_back(std::move(row));
    }
    claims[std::to_string(m)] = std::move(rows);
  }
  doc["claims"] = std::move(claims);
  if (spec.stationary_start()) {
    doc["initial"] = "stationary";
  } else {
    doc["initial"] = std::get<std::vector<double>>(spec.initial);
  }
  return doc.dump(2);
}

}  // namespace mbrisk
