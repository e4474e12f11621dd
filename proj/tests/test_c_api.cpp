// Copyright 2026 The vsr Authors
// SPDX-License-Identifier: Apache-2.0
//
// Exercises the shared library strictly through its C interface; nothing here
// links against the C++ core, so this doubles as an ABI self-sufficiency check.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <unistd.h>

#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include "vsr/c_api.h"

namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const char* tag) {
    path = fs::temp_directory_path() / (std::string("vsr_capi_") + tag + "_" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string str() const { return path.string(); }
};

// Takes ownership of a char* out-parameter.
struct ApiString {
  char* p = nullptr;
  ~ApiString() { vsr_string_free(p); }
  std::string str() const { return p ? p : ""; }
};

int count_pngs(const fs::path& dir) {
  if (!fs::exists(dir)) return -1;
  int n = 0;
  for (auto& e : fs::directory_iterator(dir))
    if (e.path().extension() == ".png") ++n;
  return n;
}

const char* kTinyConfig = R"({
  "model": {"channels": 8, "k1": 1, "k2": 1, "d": 2, "radius": 1},
  "data": {"train_root": "%TRAIN%"},
  "train": {"batch": 2, "patch": 6, "steps": 4, "seed": 3, "checkpoint_dir": "%CK%"}
})";

std::string subst(std::string text, const std::string& key, const std::string& value) {
  for (size_t pos; (pos = text.find(key)) != std::string::npos;) text.replace(pos, key.size(), value);
  return text;
}

}  // namespace

TEST_CASE("version and error state") {
  REQUIRE(vsr_version() != nullptr);
  CHECK(std::strlen(vsr_version()) > 0);
  CHECK(vsr_set_num_threads(1) == VSR_OK);
  CHECK(vsr_set_num_threads(0) == VSR_ERR_INVALID);
  CHECK(std::strlen(vsr_last_error()) > 0);
  CHECK(vsr_set_num_threads(1) == VSR_OK);
}

TEST_CASE("null arguments are rejected, never dereferenced") {
  CHECK(vsr_config_canonical(nullptr, nullptr) == VSR_ERR_INVALID);
  CHECK(vsr_trainer_create("{}", nullptr) == VSR_ERR_INVALID);
  CHECK(vsr_trainer_step(nullptr, nullptr) == VSR_ERR_INVALID);
  CHECK(vsr_trainer_save(nullptr, "x") == VSR_ERR_INVALID);
  CHECK(vsr_model_open(nullptr, nullptr) == VSR_ERR_INVALID);
  CHECK(vsr_model_infer_dir(nullptr, "a", "b", 0) == VSR_ERR_INVALID);
  CHECK(vsr_eval_dirs(nullptr, nullptr, 0, 0, 0, "luma", nullptr, nullptr, nullptr, nullptr) ==
        VSR_ERR_INVALID);
  CHECK(vsr_eval_dirs("a", "b", 0, 0, 0, nullptr, nullptr, nullptr, nullptr, nullptr) ==
        VSR_ERR_INVALID);
  int64_t n = 0;
  CHECK(vsr_trainer_param_count(nullptr, &n) == VSR_ERR_INVALID);
  vsr_trainer_destroy(nullptr);  // must be a no-op
  vsr_model_destroy(nullptr);
  vsr_string_free(nullptr);
}

TEST_CASE("config canonicalization and rejection through the ABI") {
  ApiString out;
  REQUIRE(vsr_config_canonical("{}", &out.p) == VSR_OK);
  CHECK(out.str().find("\"variant\": \"tdan\"") != std::string::npos);
  CHECK(out.str().find("\"batch\": 64") != std::string::npos);

  ApiString bad;
  CHECK(vsr_config_canonical(R"({"train": {"bogus": 1}})", &bad.p) == VSR_ERR_CONFIG);
  CHECK(std::string(vsr_last_error()).find("train.bogus") != std::string::npos);
  CHECK(bad.p == nullptr);

  CHECK(vsr_config_canonical("not json", &bad.p) == VSR_ERR_CONFIG);
}

TEST_CASE("full workflow: synth, degrade, train, infer, eval") {
  TempDir dir("flow");
  const std::string hr = (dir.path / "hr").string();
  const std::string lr = (dir.path / "lr").string();
  const std::string ck = (dir.path / "runs").string();

  REQUIRE(vsr_synth_dataset(hr.c_str(), "translate", 1, 5, 32, 32, 99) == VSR_OK);
  CHECK(count_pngs(fs::path(hr) / "translate_000") == 5);

  REQUIRE(vsr_degrade_dataset(hr.c_str(), lr.c_str(), "bi", 4, 0, 0) == VSR_OK);
  CHECK(count_pngs(fs::path(lr) / "translate_000") == 5);
  CHECK(fs::exists(fs::path(lr) / "degradation.txt"));

  const std::string cfg = subst(subst(kTinyConfig, "%TRAIN%", hr), "%CK%", ck);
  vsr_trainer* tr = nullptr;
  REQUIRE(vsr_trainer_create(cfg.c_str(), &tr) == VSR_OK);
  int64_t params = 0, planned = 0, cur = 0;
  CHECK(vsr_trainer_param_count(tr, &params) == VSR_OK);
  CHECK(params > 0);
  CHECK(vsr_trainer_planned_steps(tr, &planned) == VSR_OK);
  CHECK(planned == 4);

  ApiString echo;
  REQUIRE(vsr_trainer_config_json(tr, &echo.p) == VSR_OK);
  CHECK(echo.str().find("\"steps\": 4") != std::string::npos);

  vsr_loss_report rep{};
  for (int i = 0; i < 4; ++i) {
    REQUIRE(vsr_trainer_step(tr, &rep) == VSR_OK);
    CHECK(rep.step == i + 1);
    CHECK(rep.total > 0);
  }
  CHECK(vsr_trainer_current_step(tr, &cur) == VSR_OK);
  CHECK(cur == 4);

  double vp = 0, vs = 0;
  REQUIRE(vsr_trainer_validate(tr, hr.c_str(), &vp, &vs) == VSR_OK);
  CHECK(vp > 0);
  CHECK(vs <= 1.0);

  const std::string ckpt = (dir.path / "final.ckpt").string();
  REQUIRE(vsr_trainer_save(tr, ckpt.c_str()) == VSR_OK);
  vsr_trainer_destroy(tr);

  // resume continues the counter
  vsr_trainer* tr2 = nullptr;
  const std::string cfg8 = subst(cfg, "\"steps\": 4", "\"steps\": 8");
  REQUIRE(vsr_trainer_resume(cfg8.c_str(), ckpt.c_str(), &tr2) == VSR_OK);
  CHECK(vsr_trainer_current_step(tr2, &cur) == VSR_OK);
  CHECK(cur == 4);
  REQUIRE(vsr_trainer_step(tr2, &rep) == VSR_OK);
  CHECK(rep.step == 5);
  vsr_trainer_destroy(tr2);

  // inference through a fresh model handle
  vsr_model* m = nullptr;
  REQUIRE(vsr_model_open(ckpt.c_str(), &m) == VSR_OK);
  int64_t mp = 0;
  CHECK(vsr_model_param_count(m, &mp) == VSR_OK);
  CHECK(mp == params);
  ApiString mcfg;
  REQUIRE(vsr_model_config_json(m, &mcfg.p) == VSR_OK);
  CHECK(mcfg.str().find("\"channels\": 8") != std::string::npos);

  const std::string srd = (dir.path / "sr").string();
  REQUIRE(vsr_model_infer_dir(m, (fs::path(lr) / "translate_000").string().c_str(), srd.c_str(), 1) ==
          VSR_OK);
  CHECK(count_pngs(srd) == 5);
  CHECK(count_pngs(fs::path(srd) / "aligned") == 5 * 2);  // 2N per frame at N=1
  vsr_model_destroy(m);

  // evaluate the reconstruction against the ground truth
  ApiString text, kv;
  double ep = 0, es = 0;
  REQUIRE(vsr_eval_dirs(srd.c_str(), (fs::path(hr) / "translate_000").string().c_str(), 4, 2, 2,
                        "luma", &text.p, &kv.p, &ep, &es) == VSR_OK);
  CHECK(ep > 0);
  CHECK(text.str().find("mean") != std::string::npos);
  CHECK(kv.str().find("mean " ) != std::string::npos);
}

TEST_CASE("trainer creation fails cleanly on bad input") {
  TempDir dir("badtrain");
  vsr_trainer* tr = nullptr;

  CHECK(vsr_trainer_create(R"({"train": {"wat": 1}})", &tr) == VSR_ERR_CONFIG);
  CHECK(tr == nullptr);

  // config valid but train_root missing
  CHECK(vsr_trainer_create("{}", &tr) == VSR_ERR_CONFIG);
  CHECK(tr == nullptr);

  // root set but empty on disk -> data error, and nothing created
  const std::string cfg = subst(subst(kTinyConfig, "%TRAIN%", (dir.path / "none").string()), "%CK%",
                                (dir.path / "runs").string());
  CHECK(vsr_trainer_create(cfg.c_str(), &tr) == VSR_ERR_DATA);
  CHECK(tr == nullptr);
  CHECK(std::strlen(vsr_last_error()) > 0);
  CHECK(!fs::exists(dir.path / "runs"));
}

TEST_CASE("degrade dataset validates every sequence up front") {
  TempDir dir("deg");
  const std::string hr = (dir.path / "hr").string();
  REQUIRE(vsr_synth_dataset(hr.c_str(), "translate", 1, 3, 30, 32, 1) == VSR_OK);
  const std::string out = (dir.path / "lr").string();
  CHECK(vsr_degrade_dataset(hr.c_str(), out.c_str(), "bi", 4, 0, 0) == VSR_ERR_DATA);
  CHECK(std::string(vsr_last_error()).find("divisible") != std::string::npos);
  CHECK(!fs::exists(out));

  CHECK(vsr_degrade_dataset(hr.c_str(), out.c_str(), "nearest", 4, 0, 0) == VSR_ERR_CONFIG);
  CHECK(vsr_degrade_dataset(hr.c_str(), out.c_str(), "bi", 1, 0, 0) == VSR_ERR_INVALID);
}

TEST_CASE("model open on a missing file is a data error") {
  vsr_model* m = nullptr;
  CHECK(vsr_model_open("/nonexistent/path.ckpt", &m) == VSR_ERR_DATA);
  CHECK(m == nullptr);
}

TEST_CASE("gradcheck through the ABI") {
  ApiString report;
  int ok = 0;
  REQUIRE(vsr_gradcheck("tensor", 7, &report.p, &ok) == VSR_OK);
  CHECK(ok == 1);
  CHECK(report.str().find("pass") != std::string::npos);
  CHECK(report.str().find("FAIL") == std::string::npos);
  // outputs are optional; the status alone reports the result
  CHECK(vsr_gradcheck("tensor", 7, nullptr, nullptr) == VSR_OK);
  CHECK(vsr_gradcheck("nonsense", 7, nullptr, &ok) == VSR_ERR_CONFIG);
}
