#include "covent/cli/model.hpp"

#include <algorithm>

#include "covent/error.hpp"

namespace covent::cli {

namespace {

const std::string kDefaultSystem = "X";

[[noreturn]] void unresolved(const std::string& kind, const std::string& name) {
  throw CliError("NAME_UNRESOLVED", -1, kind + " \"" + name + "\" is not defined");
}

[[noreturn]] void invalid(const std::string& where, const std::string& what) {
  throw CliError("INVALID_CONFIG", -1, where + ": " + what);
}

std::string kind_of(const json& d, const std::string& where) {
  if (!d.is_object() || !d.contains("kind") || !d["kind"].is_string()) invalid(where, "missing \"kind\"");
  return d["kind"].get<std::string>();
}

template <class T>
T field(const json& d, const char* key, const std::string& where) {
  if (!d.contains(key)) invalid(where, std::string("missing \"") + key + "\"");
  try {
    return d[key].get<T>();
  } catch (const json::exception& e) {
    invalid(where, std::string("bad \"") + key + "\": " + e.what());
  }
}

}  // namespace

Word parse_word(const std::string& s) {
  Word w;
  for (char c : s) {
    if (c < '0' || c > '9') throw CliError("INVALID_CONFIG", -1, "word \"" + s + "\" is not a digit string");
    w.push_back(c - '0');
  }
  return w;
}

Model::Model(const json& config) {
  if (!config.is_object()) invalid("config", "top level must be an object");
  if (config.contains("seed")) seed_ = field<std::uint64_t>(config, "seed", "config");
  if (config.contains("system")) systems_.emplace(kDefaultSystem, build_system(kDefaultSystem, config["system"]));
  if (config.contains("systems"))
    for (const auto& [name, d] : config["systems"].items()) {
      if (systems_.count(name)) invalid("systems." + name, "defined twice");
      systems_.emplace(name, build_system(name, d));
    }
  if (config.contains("factors"))
    for (const auto& [name, d] : config["factors"].items()) {
      const std::string where = "factors." + name;
      const std::string kind = kind_of(d, where);
      try {
        if (kind == "identity") {
          factors_.emplace(name, FactorMap::identity(system_of(d)));
        } else if (kind == "higher_block") {
          auto phi = FactorMap::higher_block(system(field<std::string>(d, "domain", where)),
                                             field<int>(d, "block", where));
          if (d.contains("codomain")) systems_.emplace(d["codomain"].get<std::string>(), phi.codomain());
          factors_.emplace(name, std::move(phi));
        } else if (kind == "constant") {
          auto phi = FactorMap::constant(system(field<std::string>(d, "domain", where)));
          if (d.contains("codomain")) systems_.emplace(d["codomain"].get<std::string>(), phi.codomain());
          factors_.emplace(name, std::move(phi));
        } else if (kind == "code") {
          std::map<Word, int> code;
          const json table = field<json>(d, "code", where);
          for (const auto& [w, v] : table.items()) code.emplace(parse_word(w), v.get<int>());
          factors_.emplace(name, FactorMap::from_blocks(system(field<std::string>(d, "domain", where)),
                                                        system(field<std::string>(d, "codomain", where)),
                                                        field<int>(d, "block", where), code));
        } else {
          invalid(where, "unknown factor kind \"" + kind + "\"");
        }
      } catch (const Error& e) {
        throw CliError(std::string(to_string(e.code())), -1, where + ": " + e.what());
      }
    }
  if (config.contains("measures"))
    for (const auto& [name, d] : config["measures"].items()) measure_defs_.emplace(name, d);
  if (config.contains("families"))
    for (const auto& [name, d] : config["families"].items()) family_defs_.emplace(name, d);
  if (config.contains("tasks")) {
    if (!config["tasks"].is_array()) invalid("tasks", "must be an array");
    tasks_ = config["tasks"];
  }
}

SystemPtr Model::build_system(const std::string& name, const json& d) {
  const std::string where = "systems." + name;
  const std::string kind = kind_of(d, where);
  try {
    if (kind == "full_shift") return share(SymbolicSystem::full_shift(field<int>(d, "alphabet", where)));
    if (kind == "sft") return share(SymbolicSystem::sft(field<std::vector<std::vector<int>>>(d, "transition", where)));
    if (kind == "permutation") return share(SymbolicSystem::permutation(field<std::vector<int>>(d, "table", where)));
    if (kind == "power")
      return share(power_system(*system(field<std::string>(d, "of", where)), field<int>(d, "M", where)));
  } catch (const Error& e) {
    throw CliError(std::string(to_string(e.code())), -1, where + ": " + e.what());
  }
  invalid(where, "unknown system kind \"" + kind + "\"");
}

const SystemPtr& Model::system(const std::string& name) const {
  auto it = systems_.find(name);
  if (it == systems_.end()) unresolved("system", name);
  return it->second;
}

const SystemPtr& Model::system_of(const json& d) const {
  return system(d.contains("system") ? d["system"].get<std::string>() : kDefaultSystem);
}

const FactorMap& Model::factor(const std::string& name) const {
  auto it = factors_.find(name);
  if (it == factors_.end()) unresolved("factor", name);
  return it->second;
}

const InvariantMeasure& Model::measure(const std::string& name) {
  if (auto it = measures_.find(name); it != measures_.end()) return it->second;
  auto def = measure_defs_.find(name);
  if (def == measure_defs_.end()) unresolved("measure", name);
  if (std::count(resolving_.begin(), resolving_.end(), name)) invalid("measures." + name, "circular reference");
  resolving_.push_back(name);
  auto m = build_measure(name, def->second);
  resolving_.pop_back();
  return measures_.emplace(name, std::move(m)).first->second;
}

InvariantMeasure Model::build_measure(const std::string& name, const json& d) {
  const std::string where = "measures." + name;
  const std::string kind = kind_of(d, where);
  try {
    if (kind == "bernoulli") return InvariantMeasure::bernoulli(system_of(d), field<std::vector<double>>(d, "p", where));
    if (kind == "markov") {
      std::optional<std::vector<double>> pi;
      if (d.contains("pi")) pi = field<std::vector<double>>(d, "pi", where);
      return InvariantMeasure::markov(system_of(d), field<Matrix>(d, "P", where), pi);
    }
    if (kind == "points") return InvariantMeasure::on_points(system_of(d), field<std::vector<double>>(d, "weights", where));
    if (kind == "cycles") return InvariantMeasure::cycles(system_of(d), field<std::vector<double>>(d, "weights", where));
    if (kind == "mixture") {
      std::vector<ErgodicComponent> parts;
      const json comps = field<json>(d, "components", where);
      for (const auto& c : comps)
        parts.push_back({field<double>(c, "weight", where), measure(field<std::string>(c, "measure", where))});
      return mix(parts);
    }
    if (kind == "image")
      return InvariantMeasure::image(factor(field<std::string>(d, "factor", where)),
                                     measure(field<std::string>(d, "source", where)));
  } catch (const Error& e) {
    throw CliError(std::string(to_string(e.code())), -1, where + ": " + e.what());
  }
  invalid(where, "unknown measure kind \"" + kind + "\"");
}

const SetFamily& Model::family(const std::string& name) {
  if (auto it = families_.find(name); it != families_.end()) return it->second;
  auto def = family_defs_.find(name);
  if (def == family_defs_.end()) unresolved("family", name);
  if (std::count(resolving_.begin(), resolving_.end(), name)) invalid("families." + name, "circular reference");
  resolving_.push_back(name);
  auto f = build_family(name, def->second);
  resolving_.pop_back();
  return families_.emplace(name, std::move(f)).first->second;
}

SetFamily Model::build_family(const std::string& name, const json& d) {
  const std::string where = "families." + name;
  const std::string kind = kind_of(d, where);
  try {
    if (kind == "cover" || kind == "partition") {
      const auto fk = kind == "cover" ? FamilyKind::Cover : FamilyKind::Partition;
      const SystemPtr& sys = system_of(d);
      const json& sets = field<json>(d, "sets", where);
      if (!sys->is_word_system()) return SetFamily::from_points(Carrier::points(sys), sets.get<std::vector<std::vector<int>>>(), fk);
      std::vector<std::vector<Word>> words;
      int window = d.contains("window") ? d["window"].get<int>() : 0;
      for (const auto& s : sets) {
        words.emplace_back();
        for (const auto& w : s) {
          words.back().push_back(parse_word(w.get<std::string>()));
          const int len = static_cast<int>(words.back().back().size());
          if (window == 0) window = len;
          if (len != window) invalid(where, "words of different lengths");
        }
      }
      if (window == 0) invalid(where, "no words and no \"window\"");
      return SetFamily::from_words(Carrier::words(sys, window), words, fk);
    }
    if (kind == "cylinders" || kind == "trivial") {
      const SystemPtr& sys = system_of(d);
      const CarrierPtr c = sys->is_word_system() ? Carrier::words(sys, d.value("window", 1)) : Carrier::points(sys);
      return kind == "cylinders" ? SetFamily::cylinders(c) : SetFamily::trivial(c);
    }
    if (kind == "extend") return extend_window(family(field<std::string>(d, "of", where)), field<int>(d, "window", where));
    if (kind == "pullback")
      return pullback(factor(field<std::string>(d, "factor", where)), family(field<std::string>(d, "of", where)));
    if (kind == "join") {
      const auto parts = field<std::vector<std::string>>(d, "of", where);
      if (parts.empty()) invalid(where, "empty join");
      SetFamily out = family(parts[0]);
      for (std::size_t i = 1; i < parts.size(); ++i) out = join(out, family(parts[i]));
      return out;
    }
    if (kind == "dynamical_join")
      return dynamical_join(family(field<std::string>(d, "of", where)), field<int>(d, "M", where),
                            field<int>(d, "N", where));
  } catch (const Error& e) {
    throw CliError("INVALID_FAMILY", -1, where + ": " + std::string(to_string(e.code())) + ": " + e.what());
  }
  invalid(where, "unknown family kind \"" + kind + "\"");
}

void Model::validate() {
  for (const auto& [name, d] : measure_defs_) measure(name);
  for (const auto& [name, d] : family_defs_) family(name);
}

}  // namespace covent::cli
