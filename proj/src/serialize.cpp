#include "geoad/serialize.hpp"

#include <fstream>
#include <stdexcept>

#include "geoad/path_tree.hpp"

namespace geoad {

using nlohmann::json;

json instance_to_json(const Instance& inst) {
  json j;
  j["lambdas"] = inst.fatigue.lambdas;
  j["advertisers"] = json::array();
  for (const Advertiser& ad : inst.advertisers) {
    json q = json::object();
    for (const auto& [node, quality] : ad.qualities) {
      q[std::to_string(node)] = quality;
    }
    j["advertisers"].push_back({{"reward", ad.reward}, {"qualities", q}});
  }
  j["paths"] = json::array();
  for (const TreePath& path : inst.tree.paths) {
    json nodes = json::array();
    for (int node : path.nodes) nodes.push_back(inst.tree.node(node).vertex);
    j["paths"].push_back({{"gamma", path.gamma}, {"nodes", nodes}});
  }
  return j;
}

Instance instance_from_json(const json& j) {
  if (!j.is_object() || !j.contains("lambdas") || !j.contains("advertisers") ||
      !j.contains("paths")) {
    throw std::invalid_argument(
        "instance needs \"lambdas\", \"advertisers\" and \"paths\"");
  }
  Instance inst;
  inst.fatigue.lambdas = j.at("lambdas").get<std::vector<double>>();

  std::vector<Path> paths;
  for (const json& jp : j.at("paths")) {
    Path p;
    p.gamma = jp.at("gamma").get<double>();
    p.vertices = jp.at("nodes").get<std::vector<int>>();
    paths.push_back(std::move(p));
  }
  inst.tree = build_tree(paths);

  for (const json& ja : j.at("advertisers")) {
    Advertiser ad;
    ad.reward = ja.at("reward").get<double>();
    for (const auto& [key, value] : ja.at("qualities").items()) {
      std::size_t pos = 0;
      const int node = std::stoi(key, &pos);
      if (pos != key.size()) {
        throw std::invalid_argument("quality keys must be node ids: " + key);
      }
      ad.qualities[node] = value.get<double>();
    }
    inst.advertisers.push_back(std::move(ad));
  }
  check_instance(inst);
  return inst;
}

void save_instance(const std::string& path, const Instance& inst) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << instance_to_json(inst).dump(2) << '\n';
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  return instance_from_json(json::parse(in));
}

json plan_to_json(const Plan& plan) {
  json j = json::object();
  for (const auto& [node, ad] : plan.assignment) {
    j[std::to_string(node)] = ad;
  }
  return j;
}

Plan plan_from_json(const json& j) {
  Plan plan;
  for (const auto& [key, value] : j.items()) {
    std::size_t pos = 0;
    const int node = std::stoi(key, &pos);
    if (pos != key.size()) {
      throw std::invalid_argument("plan keys must be node ids: " + key);
    }
    plan.set(node, value.get<int>());
  }
  return plan;
}

}  // namespace geoad
