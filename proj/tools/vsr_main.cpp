// Copyright 2026 The vsr Authors
// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end. Talks to the core exclusively through the C API;
// config files are JSON and individual flags override file values.

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "vsr/c_api.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Exit codes: 0 ok, 1 config, 2 data, 3 numeric, 4 anything else.
int exit_code(vsr_status st) {
  switch (st) {
    case VSR_OK:
      return 0;
    case VSR_ERR_CONFIG:
      return 1;
    case VSR_ERR_DATA:
      return 2;
    case VSR_ERR_NUMERIC:
      return 3;
    default:
      return 4;
  }
}

int fail(vsr_status st) {
  std::fprintf(stderr, "error: %s\n", vsr_last_error());
  return exit_code(st);
}

std::string read_file(const std::string& path, bool& ok) {
  std::ifstream f(path);
  if (!f) {
    ok = false;
    return {};
  }
  std::stringstream ss;
  ss << f.rdbuf();
  ok = true;
  return ss.str();
}

// Owned C string from the API; frees on scope exit.
struct ApiString {
  char* ptr = nullptr;
  ~ApiString() { vsr_string_free(ptr); }
  const char* get() const { return ptr ? ptr : ""; }
};

struct TrainFlags {
  std::string config_path;
  std::string resume;
  std::optional<int64_t> steps, batch, patch, epochs;
  std::optional<double> lr;
  std::optional<uint64_t> seed;
  std::optional<std::string> out;
  int64_t save_every = 500;
  int64_t log_every = 50;
  bool no_final_validate = false;
};

// Loads the config file (when given), applies flag overrides, and returns
// the canonical full config via the API (which also validates it).
int effective_config(const std::string& path, const std::function<void(json&)>& patch,
                     std::string& canon_out) {
  json j = json::object();
  if (!path.empty()) {
    bool ok = false;
    std::string text = read_file(path, ok);
    if (!ok) {
      std::fprintf(stderr, "error: cannot open config \"%s\"\n", path.c_str());
      return 1;
    }
    try {
      j = json::parse(text);
    } catch (const json::exception& e) {
      std::fprintf(stderr, "error: config is not valid JSON: %s\n", e.what());
      return 1;
    }
  }
  if (patch) patch(j);
  ApiString canon;
  vsr_status st = vsr_config_canonical(j.dump().c_str(), &canon.ptr);
  if (st != VSR_OK) return fail(st);
  canon_out = canon.get();
  return 0;
}

const char* kLossHeader = "step      l_align     l_sr        total       lr\n";

std::string loss_line(const vsr_loss_report& r) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%-8" PRId64 "  %-10.6f  %-10.6f  %-10.6f  %.3e\n", r.step,
                r.l_align, r.l_sr, r.total, r.lr);
  return buf;
}

int run_train(const TrainFlags& fl) {
  std::string canon;
  int rc = effective_config(
      fl.config_path,
      [&](json& j) {
        if (fl.steps) j["train"]["steps"] = *fl.steps;
        if (fl.batch) j["train"]["batch"] = *fl.batch;
        if (fl.patch) j["train"]["patch"] = *fl.patch;
        if (fl.epochs) j["train"]["epochs"] = *fl.epochs;
        if (fl.lr) j["train"]["lr"] = *fl.lr;
        if (fl.seed) j["train"]["seed"] = *fl.seed;
        if (fl.out) j["train"]["checkpoint_dir"] = *fl.out;
      },
      canon);
  if (rc != 0) return rc;

  std::printf("effective config:\n%s", canon.c_str());

  // Dataset + model construction happens here; it must succeed before any
  // output directory is created.
  vsr_trainer* t = nullptr;
  vsr_status st = fl.resume.empty() ? vsr_trainer_create(canon.c_str(), &t)
                                    : vsr_trainer_resume(canon.c_str(), fl.resume.c_str(), &t);
  if (st != VSR_OK) return fail(st);

  const json cfg = json::parse(canon);
  const std::string out_dir = cfg["train"]["checkpoint_dir"].get<std::string>();
  const std::string eval_root = cfg["data"]["eval_root"].get<std::string>();

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) {
    std::fprintf(stderr, "error: cannot create \"%s\": %s\n", out_dir.c_str(),
                 ec.message().c_str());
    vsr_trainer_destroy(t);
    return 2;
  }
  std::ofstream(out_dir + "/config.json") << canon;

  const bool fresh_log = !fs::exists(out_dir + "/loss.log") || fs::file_size(out_dir + "/loss.log") == 0;
  std::ofstream log(out_dir + "/loss.log", std::ios::app);
  if (fresh_log) log << kLossHeader;

  int64_t step = 0, planned = 0;
  vsr_trainer_current_step(t, &step);
  vsr_trainer_planned_steps(t, &planned);
  int64_t params = 0;
  vsr_trainer_param_count(t, &params);
  std::printf("parameters: %" PRId64 "\n", params);
  std::printf("steps: %" PRId64 " -> %" PRId64 "\n%s", step, planned, kLossHeader);

  while (step < planned) {
    vsr_loss_report r{};
    st = vsr_trainer_step(t, &r);
    if (st != VSR_OK) {
      vsr_trainer_destroy(t);
      return fail(st);
    }
    step = r.step;
    std::string line = loss_line(r);
    log << line;
    if (step <= 3 || fl.log_every <= 1 || step % fl.log_every == 0 || step == planned) {
      std::fputs(line.c_str(), stdout);
      std::fflush(stdout);
      log.flush();
    }
    if (fl.save_every > 0 && step % fl.save_every == 0 && step != planned) {
      char name[64];
      std::snprintf(name, sizeof(name), "/step_%08" PRId64 ".ckpt", step);
      st = vsr_trainer_save(t, (out_dir + name).c_str());
      if (st != VSR_OK) {
        vsr_trainer_destroy(t);
        return fail(st);
      }
    }
  }
  st = vsr_trainer_save(t, (out_dir + "/final.ckpt").c_str());
  if (st != VSR_OK) {
    vsr_trainer_destroy(t);
    return fail(st);
  }
  std::printf("saved %s/final.ckpt\n", out_dir.c_str());

  if (!eval_root.empty() && !fl.no_final_validate) {
    double psnr = 0, ssim = 0;
    st = vsr_trainer_validate(t, nullptr, &psnr, &ssim);
    if (st != VSR_OK) {
      vsr_trainer_destroy(t);
      return fail(st);
    }
    std::printf("validation: psnr %.4f dB  ssim %.4f\n", psnr, ssim);
  }
  vsr_trainer_destroy(t);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"video super-resolution with temporally deformable alignment"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "cap worker threads (1 = deterministic)")
      ->check(CLI::PositiveNumber);

  // ---- train ----
  TrainFlags tf;
  CLI::App* train = app.add_subcommand("train", "train a model from a JSON config");
  train->add_option("--config", tf.config_path, "JSON run config")->required();
  train->add_option("--resume", tf.resume, "checkpoint to resume from");
  int64_t steps_v = 0, batch_v = 0, patch_v = 0, epochs_v = 0;
  double lr_v = 0;
  uint64_t seed_v = 0;
  std::string out_v;
  train->add_option("--steps", steps_v, "override train.steps (cap run length in steps)");
  train->add_option("--batch", batch_v, "override train.batch");
  train->add_option("--patch", patch_v, "override train.patch");
  train->add_option("--epochs", epochs_v, "override train.epochs");
  train->add_option("--lr", lr_v, "override train.lr");
  train->add_option("--seed", seed_v, "override train.seed");
  train->add_option("--out", out_v, "override train.checkpoint_dir");
  train->add_option("--save-every", tf.save_every, "checkpoint cadence in steps (0 = final only)");
  train->add_option("--log-every", tf.log_every, "stdout loss cadence in steps");
  train->add_flag("--no-final-validate", tf.no_final_validate,
                  "skip the post-training validation pass");

  // ---- infer ----
  std::string in_ckpt, in_dir, in_out;
  bool dump_aligned = false;
  CLI::App* infer = app.add_subcommand("infer", "super-resolve a PNG sequence");
  infer->add_option("--checkpoint", in_ckpt, "trained checkpoint")->required();
  infer->add_option("--in", in_dir, "directory of LR PNG frames")->required();
  infer->add_option("--out", in_out, "output directory")->required();
  infer->add_flag("--dump-aligned", dump_aligned, "also write aligned supporting frames");

  // ---- eval ----
  std::string ev_pred, ev_gt, ev_channel = "luma";
  int ev_border = 4, ev_skip_head = 2, ev_skip_tail = 2;
  CLI::App* eval = app.add_subcommand("eval", "PSNR/SSIM a prediction dir against ground truth");
  eval->add_option("--pred", ev_pred, "predicted frames")->required();
  eval->add_option("--gt", ev_gt, "ground-truth frames")->required();
  eval->add_option("--border", ev_border, "border pixels ignored on every side");
  eval->add_option("--skip-head", ev_skip_head, "frames dropped at the start");
  eval->add_option("--skip-tail", ev_skip_tail, "frames dropped at the end");
  eval->add_option("--channel", ev_channel, "luma or rgb");

  // ---- degrade ----
  std::string dg_in, dg_out, dg_mode = "bi";
  int dg_scale = 4, dg_phase = 0;
  double dg_sigma = 1.6;
  CLI::App* degrade = app.add_subcommand("degrade", "produce an LR dataset from HR sequences");
  degrade->add_option("--in", dg_in, "HR dataset root (one subdir per sequence)")->required();
  degrade->add_option("--out", dg_out, "LR output root")->required();
  degrade->add_option("--mode", dg_mode, "bi (bicubic) or bd (blur + decimate)");
  degrade->add_option("--scale", dg_scale, "downscale factor");
  degrade->add_option("--sigma", dg_sigma, "bd blur std in pixels");
  degrade->add_option("--phase", dg_phase, "bd decimation offset");

  // ---- gradcheck ----
  std::string gc_module = "all";
  uint64_t gc_seed = 0;
  CLI::App* gradcheck = app.add_subcommand("gradcheck", "finite-difference gradient audit");
  gradcheck->add_option("--module", gc_module, "deform, tensor, or all");
  gradcheck->add_option("--seed", gc_seed, "rng seed for the probe tensors");

  // ---- ablate ----
  std::string ab_config, ab_variants = "sisr,mfsr,d4";
  int64_t ab_steps = 0;
  int64_t ab_log_every = 100;
  CLI::App* ablate = app.add_subcommand("ablate", "train variants on identical data and compare");
  ablate->add_option("--config", ab_config, "JSON run config")->required();
  ablate->add_option("--variants", ab_variants, "comma list from sisr,mfsr,d2,d3,d4,d5");
  ablate->add_option("--steps", ab_steps, "steps per variant (overrides config)");
  ablate->add_option("--log-every", ab_log_every, "progress cadence in steps");

  // ---- synth ----
  std::string sy_out, sy_kind = "mixed";
  int sy_count = 10, sy_frames = 9, sy_h = 128, sy_w = 128;
  uint64_t sy_seed = 0;
  CLI::App* synth = app.add_subcommand("synth", "render synthetic HR sequences");
  synth->add_option("--out", sy_out, "output root")->required();
  synth->add_option("--kind", sy_kind, "translate, rotate-texture, checker-zoom, or mixed");
  synth->add_option("--count", sy_count, "number of sequences");
  synth->add_option("--frames", sy_frames, "frames per sequence");
  synth->add_option("--height", sy_h, "frame height");
  synth->add_option("--width", sy_w, "frame width");
  synth->add_option("--seed", sy_seed, "rng seed");

  CLI11_PARSE(app, argc, argv);

  if (threads > 0) {
    vsr_status st = vsr_set_num_threads(threads);
    if (st != VSR_OK) return fail(st);
  }

  if (*train) {
    if (train->count("--steps")) tf.steps = steps_v;
    if (train->count("--batch")) tf.batch = batch_v;
    if (train->count("--patch")) tf.patch = patch_v;
    if (train->count("--epochs")) tf.epochs = epochs_v;
    if (train->count("--lr")) tf.lr = lr_v;
    if (train->count("--seed")) tf.seed = seed_v;
    if (train->count("--out")) tf.out = out_v;
    return run_train(tf);
  }

  if (*infer) {
    vsr_model* m = nullptr;
    vsr_status st = vsr_model_open(in_ckpt.c_str(), &m);
    if (st != VSR_OK) return fail(st);
    ApiString cfg;
    if (vsr_model_config_json(m, &cfg.ptr) == VSR_OK)
      std::printf("checkpoint config:\n%s", cfg.get());
    st = vsr_model_infer_dir(m, in_dir.c_str(), in_out.c_str(), dump_aligned ? 1 : 0);
    vsr_model_destroy(m);
    if (st != VSR_OK) return fail(st);
    std::printf("wrote %s\n", in_out.c_str());
    return 0;
  }

  if (*eval) {
    ApiString text, kv;
    double psnr = 0, ssim = 0;
    std::printf("eval: border %d, skip head %d, skip tail %d, channel %s\n", ev_border,
                ev_skip_head, ev_skip_tail, ev_channel.c_str());
    vsr_status st = vsr_eval_dirs(ev_pred.c_str(), ev_gt.c_str(), ev_border, ev_skip_head,
                                  ev_skip_tail, ev_channel.c_str(), &text.ptr, &kv.ptr, &psnr,
                                  &ssim);
    if (st != VSR_OK) return fail(st);
    std::printf("%s\n%s", text.get(), kv.get());
    return 0;
  }

  if (*degrade) {
    std::printf("degrade: mode %s, scale %d", dg_mode.c_str(), dg_scale);
    if (dg_mode == "bd") std::printf(", sigma %g, phase %d", dg_sigma, dg_phase);
    std::printf("\n");
    vsr_status st = vsr_degrade_dataset(dg_in.c_str(), dg_out.c_str(), dg_mode.c_str(), dg_scale,
                                        dg_sigma, dg_phase);
    if (st != VSR_OK) return fail(st);
    std::printf("wrote %s\n", dg_out.c_str());
    return 0;
  }

  if (*gradcheck) {
    ApiString report;
    int all_pass = 0;
    vsr_status st = vsr_gradcheck(gc_module.c_str(), gc_seed, &report.ptr, &all_pass);
    std::printf("%s", report.get());
    if (st != VSR_OK && !report.ptr) return fail(st);
    return all_pass ? 0 : 3;
  }

  if (*ablate) {
    std::string canon;
    int rc = effective_config(
        ab_config, [&](json& j) { if (ab_steps > 0) j["train"]["steps"] = ab_steps; }, canon);
    if (rc != 0) return rc;
    std::printf("effective config:\n%svariants: %s\n", canon.c_str(), ab_variants.c_str());
    ApiString table;
    auto progress = [](const char* label, int64_t step, int64_t total, double loss, void* user) {
      int64_t every = *static_cast<int64_t*>(user);
      if (step == 1 || (every > 0 && step % every == 0) || step == total) {
        std::printf("[%s] step %" PRId64 "/%" PRId64 "  loss %.4f\n", label, step, total, loss);
        std::fflush(stdout);
      }
    };
    vsr_status st = vsr_ablate(canon.c_str(), ab_variants.c_str(), ab_steps, progress,
                               &ab_log_every, &table.ptr);
    if (st != VSR_OK) return fail(st);
    std::printf("%s", table.get());
    return 0;
  }

  if (*synth) {
    vsr_status st =
        vsr_synth_dataset(sy_out.c_str(), sy_kind.c_str(), sy_count, sy_frames, sy_h, sy_w, sy_seed);
    if (st != VSR_OK) return fail(st);
    std::printf("wrote %d %s sequence(s) under %s\n", sy_count, sy_kind.c_str(), sy_out.c_str());
    return 0;
  }

  return 0;
}
