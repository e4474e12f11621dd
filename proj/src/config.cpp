// Copyright 2026 The vsr Authors
// SPDX-License-Identifier: Apache-2.0

#include "vsr/config.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>

#include "json.hpp"

namespace vsr {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const char* section,
                    std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* k : allowed) known = known || it.key() == k;
    if (!known)
      throw config_error(std::string("config: unknown key \"") + section + "." + it.key() + "\"");
  }
}

// Fetches obj[key] into out when present, with a config_error (not a json
// exception) on type mismatch.
template <typename T>
void fetch(const json& obj, const char* section, const char* key, T& out) {
  auto it = obj.find(key);
  if (it == obj.end()) return;
  try {
    out = it->get<T>();
  } catch (const json::exception&) {
    throw config_error(std::string("config: bad value type for \"") + section + "." + key + "\"");
  }
}

}  // namespace

void RunConfig::validate() const {
  model.validate();
  if (data.degradation != "bi" && data.degradation != "bd")
    throw config_error("config: data.degradation must be \"bi\" or \"bd\", got \"" +
                       data.degradation + "\"");
  if (data.sigma <= 0) throw config_error("config: data.sigma must be > 0");
  if (data.phase < 0 || data.phase >= model.scale)
    throw config_error("config: data.phase must lie in [0, scale)");
  train_config().validate();  // batch/patch/lr/epochs checks
  if (eval.border < 0 || eval.skip_head < 0 || eval.skip_tail < 0)
    throw config_error("config: eval.border/skip_head/skip_tail must be >= 0");
  parse_channel_mode(eval.channel);
}

DegradationSpec RunConfig::degradation_spec() const {
  DegradationSpec d;
  d.mode = DegradationSpec::parse_mode(data.degradation);
  d.s = model.scale;
  d.sigma = data.sigma;
  d.phase = data.phase;
  return d;
}

TrainConfig RunConfig::train_config() const {
  TrainConfig t;
  t.batch = train.batch;
  t.patch = train.patch;
  t.lr = train.lr;
  t.epochs = train.epochs;
  t.steps = train.steps;
  t.seed = train.seed;
  t.augment = data.augment;
  return t;
}

EvalProtocol RunConfig::eval_protocol() const {
  EvalProtocol p;
  p.border_crop = eval.border;
  p.skip_head = eval.skip_head;
  p.skip_tail = eval.skip_tail;
  p.channel_mode = parse_channel_mode(eval.channel);
  return p;
}

RunConfig parse_run_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw config_error(std::string("config: not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw config_error("config: top level must be a JSON object");
  reject_unknown(j, "", {"model", "data", "train", "eval"});

  RunConfig rc;
  if (j.contains("model")) {
    const json& m = j["model"];
    if (!m.is_object()) throw config_error("config: \"model\" must be an object");
    reject_unknown(m, "model", {"variant", "k1", "k2", "channels", "d", "radius", "scale"});
    fetch(m, "model", "variant", rc.model.variant);
    fetch(m, "model", "k1", rc.model.k1);
    fetch(m, "model", "k2", rc.model.k2);
    fetch(m, "model", "channels", rc.model.channels);
    fetch(m, "model", "d", rc.model.d);
    fetch(m, "model", "radius", rc.model.radius);
    fetch(m, "model", "scale", rc.model.scale);
  }
  if (j.contains("data")) {
    const json& d = j["data"];
    if (!d.is_object()) throw config_error("config: \"data\" must be an object");
    reject_unknown(d, "data", {"train_root", "eval_root", "degradation", "sigma", "phase",
                               "augment"});
    fetch(d, "data", "train_root", rc.data.train_root);
    fetch(d, "data", "eval_root", rc.data.eval_root);
    fetch(d, "data", "degradation", rc.data.degradation);
    fetch(d, "data", "sigma", rc.data.sigma);
    fetch(d, "data", "phase", rc.data.phase);
    fetch(d, "data", "augment", rc.data.augment);
  }
  if (j.contains("train")) {
    const json& t = j["train"];
    if (!t.is_object()) throw config_error("config: \"train\" must be an object");
    reject_unknown(t, "train",
                   {"batch", "patch", "lr", "epochs", "steps", "seed", "clip_norm",
                    "checkpoint_dir"});
    fetch(t, "train", "batch", rc.train.batch);
    fetch(t, "train", "patch", rc.train.patch);
    fetch(t, "train", "lr", rc.train.lr);
    fetch(t, "train", "epochs", rc.train.epochs);
    fetch(t, "train", "steps", rc.train.steps);
    fetch(t, "train", "seed", rc.train.seed);
    fetch(t, "train", "clip_norm", rc.train.clip_norm);
    fetch(t, "train", "checkpoint_dir", rc.train.checkpoint_dir);
  }
  if (j.contains("eval")) {
    const json& e = j["eval"];
    if (!e.is_object()) throw config_error("config: \"eval\" must be an object");
    reject_unknown(e, "eval", {"border", "skip_head", "skip_tail", "channel"});
    fetch(e, "eval", "border", rc.eval.border);
    fetch(e, "eval", "skip_head", rc.eval.skip_head);
    fetch(e, "eval", "skip_tail", rc.eval.skip_tail);
    fetch(e, "eval", "channel", rc.eval.channel);
  }
  rc.validate();
  return rc;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw config_error("config: cannot open \"" + path + "\"");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_run_config(ss.str());
}

std::string run_config_json(const RunConfig& rc) {
  json j = json::object();
  j["model"] = {{"variant", rc.model.variant}, {"k1", rc.model.k1},       {"k2", rc.model.k2},
                {"channels", rc.model.channels}, {"d", rc.model.d},
                {"radius", rc.model.radius},   {"scale", rc.model.scale}};
  j["data"] = {{"train_root", rc.data.train_root}, {"eval_root", rc.data.eval_root},
               {"degradation", rc.data.degradation}, {"sigma", rc.data.sigma},
               {"phase", rc.data.phase},          {"augment", rc.data.augment}};
  j["train"] = {{"batch", rc.train.batch},   {"patch", rc.train.patch},
                {"lr", rc.train.lr},         {"epochs", rc.train.epochs},
                {"steps", rc.train.steps},   {"seed", rc.train.seed},
                {"checkpoint_dir", rc.train.checkpoint_dir}};
  j["eval"] = {{"border", rc.eval.border},       {"skip_head", rc.eval.skip_head},
               {"skip_tail", rc.eval.skip_tail}, {"channel", rc.eval.channel}};
  return j.dump(2) + "\n";
}

}  // namespace vsr
