// Copyright 2026 The vsr Authors
// SPDX-License-Identifier: Apache-2.0

#include "vsr/c_api.h"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "vsr/config.hpp"
#include "vsr/degrade.hpp"
#include "vsr/gradcheck.hpp"
#include "vsr/image_io.hpp"
#include "vsr/metrics.hpp"
#include "vsr/parallel.hpp"
#include "vsr/synth.hpp"
#include "vsr/trainer.hpp"

namespace fs = std::filesystem;

// Opaque handle bodies (global scope to match the C typedefs).
struct vsr_trainer {
  vsr::RunConfig rc;
  std::shared_ptr<vsr::ClipDataset> data;
  std::unique_ptr<vsr::Trainer> impl;
};

struct vsr_model {
  vsr::ModelConfig cfg;
  std::unique_ptr<vsr::Model> impl;
};

namespace {

thread_local std::string t_last_error;

vsr_status status_of(vsr::ErrorClass c) {
  switch (c) {
    case vsr::ErrorClass::Config:
      return VSR_ERR_CONFIG;
    case vsr::ErrorClass::Data:
      return VSR_ERR_DATA;
    case vsr::ErrorClass::Numeric:
      return VSR_ERR_NUMERIC;
    case vsr::ErrorClass::Invalid:
      return VSR_ERR_INVALID;
    default:
      return VSR_ERR_INTERNAL;
  }
}

// Runs f (returning a status for soft failures) with exceptions mapped to
// status codes + the thread's error slot.
template <typename F>
vsr_status guarded(F&& f) {
  t_last_error.clear();
  try {
    return f();
  } catch (const vsr::Error& e) {
    t_last_error = e.what();
    return status_of(e.error_class());
  } catch (const std::exception& e) {
    t_last_error = e.what();
    return VSR_ERR_INTERNAL;
  }
}

vsr_status misuse(const char* msg) {
  t_last_error = msg;
  return VSR_ERR_INVALID;
}

char* dup_string(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (p) std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

// Mean PSNR/SSIM of plain bicubic upscaling over a dataset — the no-learning
// baseline every model row is compared against.
vsr::ValidationResult bicubic_baseline(const vsr::ClipDataset& ds,
                                       const vsr::EvalProtocol& protocol) {
  vsr::ValidationResult out;
  double psum = 0, ssum = 0;
  for (int64_t i = 0; i < ds.num_sequences(); ++i) {
    const vsr::SequenceData& sq = ds.seq(i);
    std::vector<vsr::Tensor> up;
    up.reserve(sq.lr.size());
    for (size_t t = 0; t < sq.lr.size(); ++t)
      up.push_back(vsr::resize_bicubic(sq.lr[t], sq.hr[t].shape().h, sq.hr[t].shape().w));
    vsr::SequenceReport r = vsr::evaluate_sequence(up, sq.hr, protocol);
    psum += r.mean_psnr;
    ssum += r.mean_ssim;
  }
  out.sequences = ds.num_sequences();
  out.mean_psnr = psum / static_cast<double>(out.sequences);
  out.mean_ssim = ssum / static_cast<double>(out.sequences);
  return out;
}

vsr_status make_trainer(const char* config_json, const char* checkpoint, vsr_trainer** out) {
  if (!config_json || !out) return misuse("vsr_trainer_create: null argument");
  *out = nullptr;
  return guarded([&]() -> vsr_status {
    vsr::RunConfig rc = vsr::parse_run_config(config_json);
    if (rc.data.train_root.empty())
      throw vsr::config_error("config: data.train_root is required for training");
    auto h = std::make_unique<vsr_trainer>();
    h->rc = rc;
    h->data = std::make_shared<vsr::ClipDataset>(rc.data.train_root, rc.degradation_spec(),
                                                 vsr::Dtype::F32);
    if (checkpoint)
      h->impl = std::make_unique<vsr::Trainer>(checkpoint, rc.model, rc.train_config(), h->data);
    else
      h->impl = std::make_unique<vsr::Trainer>(rc.model, rc.train_config(), h->data);
    *out = h.release();
    return VSR_OK;
  });
}

}  // namespace

extern "C" {

const char* vsr_last_error(void) { return t_last_error.c_str(); }

const char* vsr_version(void) { return "0.1.0"; }

vsr_status vsr_set_num_threads(int n) {
  if (n < 1) return misuse("vsr_set_num_threads: n must be >= 1");
  t_last_error.clear();
  vsr::set_num_threads(n);
  return VSR_OK;
}

void vsr_string_free(char* s) { std::free(s); }

vsr_status vsr_config_canonical(const char* config_json, char** out) {
  if (!config_json || !out) return misuse("vsr_config_canonical: null argument");
  *out = nullptr;
  return guarded([&]() -> vsr_status {
    *out = dup_string(vsr::run_config_json(vsr::parse_run_config(config_json)));
    return VSR_OK;
  });
}

/* ---------------------------------------------------------------- training */

vsr_status vsr_trainer_create(const char* config_json, vsr_trainer** out) {
  return make_trainer(config_json, nullptr, out);
}

vsr_status vsr_trainer_resume(const char* config_json, const char* checkpoint_path,
                              vsr_trainer** out) {
  if (!checkpoint_path) return misuse("vsr_trainer_resume: null checkpoint path");
  return make_trainer(config_json, checkpoint_path, out);
}

vsr_status vsr_trainer_step(vsr_trainer* t, vsr_loss_report* out) {
  if (!t) return misuse("vsr_trainer_step: null handle");
  return guarded([&]() -> vsr_status {
    vsr::LossReport r = t->impl->step();
    if (out) {
      out->step = r.step;
      out->l_align = r.l_align;
      out->l_sr = r.l_sr;
      out->total = r.total;
      out->lr = r.lr;
    }
    return VSR_OK;
  });
}

vsr_status vsr_trainer_validate(vsr_trainer* t, const char* eval_root, double* mean_psnr,
                                double* mean_ssim) {
  if (!t) return misuse("vsr_trainer_validate: null handle");
  return guarded([&]() -> vsr_status {
    std::string root = eval_root && *eval_root ? eval_root : t->rc.data.eval_root;
    if (root.empty())
      throw vsr::config_error("validate: no eval_root given (argument or config data.eval_root)");
    vsr::ClipDataset eval(root, t->rc.degradation_spec(), vsr::Dtype::F32);
    vsr::ValidationResult v = t->impl->validate(eval, t->rc.eval_protocol());
    if (mean_psnr) *mean_psnr = v.mean_psnr;
    if (mean_ssim) *mean_ssim = v.mean_ssim;
    return VSR_OK;
  });
}

vsr_status vsr_trainer_save(vsr_trainer* t, const char* path) {
  if (!t || !path) return misuse("vsr_trainer_save: null argument");
  return guarded([&]() -> vsr_status {
    t->impl->save(path);
    return VSR_OK;
  });
}

vsr_status vsr_trainer_config_json(const vsr_trainer* t, char** out) {
  if (!t || !out) return misuse("vsr_trainer_config_json: null argument");
  *out = nullptr;
  return guarded([&]() -> vsr_status {
    *out = dup_string(vsr::run_config_json(t->rc));
    return VSR_OK;
  });
}

vsr_status vsr_trainer_param_count(const vsr_trainer* t, int64_t* out) {
  if (!t || !out) return misuse("vsr_trainer_param_count: null argument");
  t_last_error.clear();
  *out = t->impl->model().param_count();
  return VSR_OK;
}

vsr_status vsr_trainer_current_step(const vsr_trainer* t, int64_t* out) {
  if (!t || !out) return misuse("vsr_trainer_current_step: null argument");
  t_last_error.clear();
  *out = t->impl->current_step();
  return VSR_OK;
}

vsr_status vsr_trainer_planned_steps(const vsr_trainer* t, int64_t* out) {
  if (!t || !out) return misuse("vsr_trainer_planned_steps: null argument");
  t_last_error.clear();
  *out = t->impl->planned_steps();
  return VSR_OK;
}

void vsr_trainer_destroy(vsr_trainer* t) { delete t; }

/* --------------------------------------------------------------- inference */

vsr_status vsr_model_open(const char* checkpoint_path, vsr_model** out) {
  if (!checkpoint_path || !out) return misuse("vsr_model_open: null argument");
  *out = nullptr;
  return guarded([&]() -> vsr_status {
    auto h = std::make_unique<vsr_model>();
    vsr::Restored r = vsr::load_checkpoint(checkpoint_path, vsr::Dtype::F32, false);
    h->cfg = r.model->config();
    h->impl = std::move(r.model);
    *out = h.release();
    return VSR_OK;
  });
}

vsr_status vsr_model_infer_dir(vsr_model* m, const char* lr_dir, const char* out_dir,
                               int dump_aligned) {
  if (!m || !lr_dir || !out_dir) return misuse("vsr_model_infer_dir: null argument");
  return guarded([&]() -> vsr_status {
    if (dump_aligned && !m->cfg.aligns())
      throw vsr::config_error("infer: variant \"" + m->cfg.variant +
                              "\" has no alignment stage to dump");
    std::vector<vsr::Tensor> lr = vsr::load_frames(lr_dir, m->impl->dtype());
    std::vector<std::vector<vsr::Tensor>> aligned;
    std::vector<vsr::Tensor> hr =
        vsr::infer_sequence(*m->impl, lr, dump_aligned ? &aligned : nullptr);
    vsr::save_frames(hr, out_dir);
    if (dump_aligned) {
      fs::create_directories(fs::path(out_dir) / "aligned");
      char name[64];
      for (size_t t = 0; t < aligned.size(); ++t)
        for (size_t j = 0; j < aligned[t].size(); ++j) {
          std::snprintf(name, sizeof(name), "frame_%05zu_sup%zu.png", t, j);
          vsr::save_png(aligned[t][j], (fs::path(out_dir) / "aligned" / name).string());
        }
    }
    return VSR_OK;
  });
}

vsr_status vsr_model_param_count(const vsr_model* m, int64_t* out) {
  if (!m || !out) return misuse("vsr_model_param_count: null argument");
  t_last_error.clear();
  *out = m->impl->param_count();
  return VSR_OK;
}

vsr_status vsr_model_config_json(const vsr_model* m, char** out) {
  if (!m || !out) return misuse("vsr_model_config_json: null argument");
  *out = nullptr;
  return guarded([&]() -> vsr_status {
    vsr::RunConfig rc;
    rc.model = m->cfg;
    // Reuse the run-config serializer; only the model section is meaningful.
    std::string full = vsr::run_config_json(rc);
    *out = dup_string(full);
    return VSR_OK;
  });
}

void vsr_model_destroy(vsr_model* m) { delete m; }

/* ------------------------------------------------------------ data tooling */

vsr_status vsr_degrade_dataset(const char* hr_root, const char* out_root, const char* mode,
                               int scale, double sigma, int phase) {
  if (!hr_root || !out_root || !mode) return misuse("vsr_degrade_dataset: null argument");
  return guarded([&]() -> vsr_status {
    vsr::DegradationSpec spec;
    spec.mode = vsr::DegradationSpec::parse_mode(mode);
    spec.s = scale;
    spec.sigma = sigma;
    spec.phase = phase;
    if (scale < 1) throw vsr::config_error("degrade: scale must be >= 1");
    if (spec.mode == vsr::DegradationSpec::Mode::BD && (phase < 0 || phase >= scale))
      throw vsr::config_error("degrade: phase must lie in [0, scale)");
    if (spec.mode == vsr::DegradationSpec::Mode::BD && sigma <= 0)
      throw vsr::config_error("degrade: sigma must be > 0");

    std::vector<std::string> seqs = vsr::list_sequence_dirs(hr_root);
    // Validate every frame first so the error can list all offenders and no
    // partial output tree is left behind.
    std::string bad;
    for (const std::string& sd : seqs) {
      for (const std::string& f : vsr::list_pngs(sd)) {
        vsr::Tensor img = vsr::load_png(f);
        if (img.shape().h % scale != 0 || img.shape().w % scale != 0)
          bad += "  " + f + ": " + std::to_string(img.shape().h) + "x" +
                 std::to_string(img.shape().w) + " not divisible by " + std::to_string(scale) +
                 "\n";
      }
    }
    if (!bad.empty()) throw vsr::data_error("degrade: frames not divisible by scale:\n" + bad);

    for (const std::string& sd : seqs) {
      std::vector<vsr::Tensor> hr = vsr::load_frames(sd);
      std::vector<vsr::Tensor> lr;
      lr.reserve(hr.size());
      for (const vsr::Tensor& f : hr) lr.push_back(vsr::degrade(f, spec));
      vsr::save_frames(lr, (fs::path(out_root) / fs::path(sd).filename()).string());
    }
    std::ofstream mf(fs::path(out_root) / "degradation.txt");
    mf << vsr::degradation_manifest(spec);
    return VSR_OK;
  });
}

vsr_status vsr_synth_dataset(const char* out_root, const char* kind, int sequences, int frames,
                             int height, int width, uint64_t seed) {
  if (!out_root || !kind) return misuse("vsr_synth_dataset: null argument");
  return guarded([&]() -> vsr_status {
    vsr::synth_dataset(out_root, kind, sequences, frames, height, width, seed);
    return VSR_OK;
  });
}

/* -------------------------------------------------------------- evaluation */

vsr_status vsr_eval_dirs(const char* pred_dir, const char* gt_dir, int border, int skip_head,
                         int skip_tail, const char* channel, char** text_out, char** kv_out,
                         double* mean_psnr, double* mean_ssim) {
  if (!pred_dir || !gt_dir || !channel) return misuse("vsr_eval_dirs: null argument");
  if (text_out) *text_out = nullptr;
  if (kv_out) *kv_out = nullptr;
  return guarded([&]() -> vsr_status {
    vsr::EvalProtocol p;
    p.border_crop = border;
    p.skip_head = skip_head;
    p.skip_tail = skip_tail;
    p.channel_mode = vsr::parse_channel_mode(channel);
    std::vector<vsr::Tensor> pred = vsr::load_frames(pred_dir, vsr::Dtype::F64);
    std::vector<vsr::Tensor> gt = vsr::load_frames(gt_dir, vsr::Dtype::F64);
    vsr::SequenceReport r = vsr::evaluate_sequence(pred, gt, p);
    if (text_out) *text_out = dup_string(vsr::report_text(r, p));
    if (kv_out) *kv_out = dup_string(vsr::report_kv(r));
    if (mean_psnr) *mean_psnr = r.mean_psnr;
    if (mean_ssim) *mean_ssim = r.mean_ssim;
    return VSR_OK;
  });
}

/* -------------------------------------------------------------- validation */

vsr_status vsr_gradcheck(const char* module, uint64_t seed, char** report_out, int* all_pass) {
  if (!module) return misuse("vsr_gradcheck: null module");
  if (report_out) *report_out = nullptr;
  return guarded([&]() -> vsr_status {
    vsr::GradCheckReport r = vsr::run_gradcheck(module, seed);
    if (report_out) *report_out = dup_string(vsr::gradcheck_text(r));
    if (all_pass) *all_pass = r.all_pass ? 1 : 0;
    if (!r.all_pass) {
      t_last_error = "gradcheck: at least one operator exceeded tolerance";
      return VSR_ERR_NUMERIC;
    }
    return VSR_OK;
  });
}

vsr_status vsr_ablate(const char* config_json, const char* variants, int64_t steps,
                      vsr_progress_fn progress, void* user, char** table_out) {
  if (!config_json || !variants || !table_out) return misuse("vsr_ablate: null argument");
  *table_out = nullptr;
  return guarded([&]() -> vsr_status {
    vsr::RunConfig rc = vsr::parse_run_config(config_json);
    if (rc.data.train_root.empty() || rc.data.eval_root.empty())
      throw vsr::config_error("ablate: both data.train_root and data.eval_root are required");

    // Parse the variant list into model configs sharing every other knob.
    struct Row {
      std::string label;
      vsr::ModelConfig mc;
      double psnr = 0, ssim = 0;
      int64_t params = 0;
    };
    std::vector<Row> rows;
    std::stringstream ss(variants);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      if (tok.empty()) continue;
      Row r;
      r.label = tok;
      r.mc = rc.model;
      if (tok == "sisr" || tok == "mfsr") {
        r.mc.variant = tok;
      } else if (tok.size() == 2 && tok[0] == 'd' && tok[1] >= '2' && tok[1] <= '5') {
        r.mc.variant = "tdan";
        r.mc.d = tok[1] - '0';
      } else {
        throw vsr::config_error("ablate: unknown variant \"" + tok +
                                "\" (expected sisr, mfsr, or d2..d5)");
      }
      rows.push_back(std::move(r));
    }
    if (rows.empty()) throw vsr::config_error("ablate: empty variant list");

    auto train_ds = std::make_shared<vsr::ClipDataset>(rc.data.train_root, rc.degradation_spec(),
                                                       vsr::Dtype::F32);
    vsr::ClipDataset eval_ds(rc.data.eval_root, rc.degradation_spec(), vsr::Dtype::F32);
    vsr::TrainConfig tc = rc.train_config();
    if (steps > 0) tc.steps = steps;

    vsr::ValidationResult base = bicubic_baseline(eval_ds, rc.eval_protocol());

    for (Row& r : rows) {
      vsr::Trainer t(r.mc, tc, train_ds);
      const int64_t total = t.planned_steps();
      while (t.current_step() < total) {
        vsr::LossReport lr = t.step();
        if (progress) progress(r.label.c_str(), lr.step, total, lr.total, user);
      }
      fs::create_directories(rc.train.checkpoint_dir);
      t.save((fs::path(rc.train.checkpoint_dir) / (r.label + ".ckpt")).string());
      vsr::ValidationResult v = t.validate(eval_ds, rc.eval_protocol());
      r.psnr = v.mean_psnr;
      r.ssim = v.mean_ssim;
      r.params = t.model().param_count();
    }

    char line[128];
    std::string table = "variant     psnr_db     ssim        params\n";
    std::snprintf(line, sizeof(line), "%-10s  %-10s  %-10s  %s\n", "bicubic",
                  vsr::format_metric(base.mean_psnr).c_str(),
                  vsr::format_metric(base.mean_ssim).c_str(), "-");
    table += line;
    for (const Row& r : rows) {
      std::snprintf(line, sizeof(line), "%-10s  %-10s  %-10s  %lld\n", r.label.c_str(),
                    vsr::format_metric(r.psnr).c_str(), vsr::format_metric(r.ssim).c_str(),
                    static_cast<long long>(r.params));
      table += line;
    }
    *table_out = dup_string(table);
    return VSR_OK;
  });
}

}  // extern "C"
