#include "bsmguard/ml/model_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include "bsmguard/error.hpp"
#include "json.hpp"

namespace bsmguard::ml {

using nlohmann::json;

namespace {

json tree_params_json(const CartParams& p) {
  return {{"criterion", to_string(p.criterion)},
          {"max_depth", p.max_depth},
          {"min_split", p.min_split},
          {"min_leaf", p.min_leaf},
          {"class_weight", p.weighting == ClassWeighting::balanced ? "balanced" : "none"},
          {"costs", {p.costs.no_attack_as_attack, p.costs.attack_as_no_attack}}};
}

CartParams tree_params_from(const json& j) {
  CartParams p;
  p.criterion = parse_criterion(j.at("criterion").get<std::string>());
  p.max_depth = j.at("max_depth").get<std::size_t>();
  p.min_split = j.at("min_split").get<std::size_t>();
  p.min_leaf = j.at("min_leaf").get<std::size_t>();
  const auto weighting = j.at("class_weight").get<std::string>();
  if (weighting == "balanced") {
    p.weighting = ClassWeighting::balanced;
  } else if (weighting == "none") {
    p.weighting = ClassWeighting::none;
  } else {
    throw InputError("unknown class_weight '" + weighting + "'");
  }
  p.costs.no_attack_as_attack = j.at("costs").at(0).get<double>();
  p.costs.attack_as_no_attack = j.at("costs").at(1).get<double>();
  return p;
}

// Node layout: [feature, threshold, impurity, gain, w0, w1, n0, n1, p0, p1, left, right, depth]
json tree_json(const Cart& tree) {
  json nodes = json::array();
  for (const auto& n : tree.nodes()) {
    nodes.push_back({n.feature, n.threshold, n.impurity, n.gain, n.weight[0], n.weight[1], n.count[0], n.count[1],
                     n.probability[0], n.probability[1], n.left, n.right, n.depth});
  }
  return nodes;
}

Cart tree_from(const json& nodes, const CartParams& params, std::size_t n_features) {
  std::vector<CartNode> out;
  out.reserve(nodes.size());
  for (const auto& a : nodes) {
    if (!a.is_array() || a.size() != 13) throw InputError("tree node must be a 13-element array");
    CartNode n;
    n.feature = a[0].get<int>();
    n.threshold = a[1].get<double>();
    n.impurity = a[2].get<double>();
    n.gain = a[3].get<double>();
    n.weight = {a[4].get<double>(), a[5].get<double>()};
    n.count = {a[6].get<std::size_t>(), a[7].get<std::size_t>()};
    n.probability = {a[8].get<double>(), a[9].get<double>()};
    n.left = a[10].get<std::int32_t>();
    n.right = a[11].get<std::int32_t>();
    n.depth = a[12].get<std::size_t>();
    out.push_back(n);
  }
  return Cart::from_nodes(params, n_features, std::move(out));
}

json classifier_json(const ModelSpec& spec, const Classifier& c) {
  switch (spec.family) {
    case ModelFamily::knn: {
      const auto& m = std::get<Knn>(c);
      json labels = json::array();
      for (Label l : m.train().labels) labels.push_back(to_int(l));
      return {{"params", {{"k", m.params().k}}},
              {"n_features", m.train().n_features},
              {"values", m.train().values},
              {"labels", labels}};
    }
    case ModelFamily::cart: {
      const auto& m = std::get<Cart>(c);
      return {{"params", tree_params_json(m.params())}, {"n_features", m.n_features()}, {"nodes", tree_json(m)}};
    }
    case ModelFamily::forest: {
      const auto& m = std::get<RandomForest>(c);
      json trees = json::array();
      for (const auto& t : m.trees()) trees.push_back(tree_json(t));
      return {{"params", {{"n_trees", m.params().n_trees}, {"seed", m.params().seed}, {"tree", tree_params_json(m.params().tree)}}},
              {"n_features", m.trees().front().n_features()},
              {"trees", trees}};
    }
    case ModelFamily::nn: {
      const auto& m = std::get<NeuralNet>(c);
      return {{"params",
               {{"hidden", spec.nn.hidden},
                {"epochs", spec.nn.epochs},
                {"batch", spec.nn.batch},
                {"learning_rate", spec.nn.learning_rate},
                {"init_range", spec.nn.init_range},
                {"adam", {spec.nn.beta1, spec.nn.beta2, spec.nn.epsilon}}}},
              {"n_features", m.n_features()},
              {"layout", "W_h (hidden x features, row-major), b_h, w_o, b_o"},
              {"parameters", m.parameters()}};
    }
  }
  throw ParameterError("unknown model family");
}

Classifier classifier_from(const json& j, ModelSpec& spec) {
  const auto n_features = j.at("n_features").get<std::size_t>();
  const auto& p = j.at("params");
  switch (spec.family) {
    case ModelFamily::knn: {
      spec.knn.k = p.at("k").get<std::size_t>();
      Dataset train(n_features);
      train.values = j.at("values").get<std::vector<double>>();
      for (int l : j.at("labels").get<std::vector<int>>()) {
        if (l != 0 && l != 1) throw InputError("KNN label must be 0 or 1");
        train.labels.push_back(l == 1 ? Label::attack : Label::no_attack);
      }
      Knn m(spec.knn);
      m.fit(std::move(train));
      return m;
    }
    case ModelFamily::cart:
      spec.cart = tree_params_from(p);
      return tree_from(j.at("nodes"), spec.cart, n_features);
    case ModelFamily::forest: {
      spec.forest.n_trees = p.at("n_trees").get<std::size_t>();
      spec.forest.seed = p.at("seed").get<std::uint64_t>();
      spec.forest.tree = tree_params_from(p.at("tree"));
      std::vector<Cart> trees;
      for (const auto& t : j.at("trees")) trees.push_back(tree_from(t, spec.forest.tree, n_features));
      if (trees.size() != spec.forest.n_trees) throw InputError("forest tree count does not match n_trees");
      return RandomForest::from_trees(spec.forest, std::move(trees));
    }
    case ModelFamily::nn: {
      spec.nn.hidden = p.at("hidden").get<std::size_t>();
      spec.nn.epochs = p.at("epochs").get<std::size_t>();
      spec.nn.batch = p.at("batch").get<std::size_t>();
      spec.nn.learning_rate = p.at("learning_rate").get<double>();
      spec.nn.init_range = p.at("init_range").get<double>();
      spec.nn.beta1 = p.at("adam").at(0).get<double>();
      spec.nn.beta2 = p.at("adam").at(1).get<double>();
      spec.nn.epsilon = p.at("adam").at(2).get<double>();
      return NeuralNet::from_parameters(n_features, spec.nn.hidden, j.at("parameters").get<std::vector<double>>());
    }
  }
  throw InputError("unknown model family");
}

}  // namespace

void write_model(std::ostream& out, const ModelFile& file) {
  const auto& m = file.model;
  std::vector<int> floored;
  for (bool f : m.standardizer.floored) floored.push_back(f ? 1 : 0);
  const json doc = {
      {"format", kModelFormat},
      {"version", kModelFormatVersion},
      {"family", std::string(to_string(m.spec.family))},
      {"standardizer", {{"mean", m.standardizer.mean}, {"stdev", m.standardizer.stdev}, {"floored", floored}}},
      {"training",
       {{"seed", file.training.seed},
        {"train_fraction", file.training.train_fraction},
        {"window", file.training.window},
        {"folds", file.training.folds},
        {"cv_accuracy", file.training.cv_accuracy}}},
      {"model", classifier_json(m.spec, m.classifier)}};
  out << doc.dump(1) << '\n';
  if (!out) throw Error("failed writing model");
}

void save_model(const std::string& path, const ModelFile& file) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  write_model(out, file);
}

ModelFile read_model(std::istream& in) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw InputError(std::string("model file is not valid JSON: ") + e.what());
  }
  try {
    if (doc.at("format").get<std::string>() != kModelFormat) throw InputError("not a bsmguard model file");
    const int version = doc.at("version").get<int>();
    if (version != kModelFormatVersion) {
      throw InputError("unsupported model format version " + std::to_string(version));
    }
    ModelFile file;
    file.model.spec = default_spec(parse_model_family(doc.at("family").get<std::string>()));
    const auto& s = doc.at("standardizer");
    file.model.standardizer.mean = s.at("mean").get<std::vector<double>>();
    file.model.standardizer.stdev = s.at("stdev").get<std::vector<double>>();
    for (int f : s.at("floored").get<std::vector<int>>()) file.model.standardizer.floored.push_back(f != 0);
    if (file.model.standardizer.stdev.size() != file.model.standardizer.mean.size() ||
        file.model.standardizer.floored.size() != file.model.standardizer.mean.size()) {
      throw InputError("standardizer arrays differ in length");
    }
    const auto& t = doc.at("training");
    file.training.seed = t.at("seed").get<std::uint64_t>();
    file.training.train_fraction = t.at("train_fraction").get<double>();
    file.training.window = t.at("window").get<double>();
    file.training.folds = t.at("folds").get<std::size_t>();
    file.training.cv_accuracy = t.at("cv_accuracy").get<double>();
    file.model.classifier = classifier_from(doc.at("model"), file.model.spec);
    return file;
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed model file: ") + e.what());
  } catch (const ConfigError& e) {
    throw InputError(std::string("malformed model file: ") + e.what());
  } catch (const ParameterError& e) {
    throw InputError(std::string("malformed model file: ") + e.what());
  }
}

ModelFile load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open model file '" + path + "'");
  return read_model(in);
}

}  // namespace bsmguard::ml
