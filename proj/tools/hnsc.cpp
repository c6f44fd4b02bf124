// Copyright 2026 The hnsc Authors
// SPDX-License-Identifier: Apache-2.0
//
// hnsc: command-line front end for the hierarchical neural surface codec.
// Talks to the core exclusively through the C API in hns.h.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "hns.h"
#include "json.hpp"

namespace {

using nlohmann::json;

int fail(hns_status status, const std::string& context) {
  std::cerr << "hnsc: " << context << ": " << hns_last_error() << "\n";
  return static_cast<int>(status);
}

struct EncodeArgs {
  std::string input, output;
  std::string config_path;
  std::string import_sphere;
  std::string preset = "50KB";
  std::string fine_sampling = "table";
  std::string progress_log;
  int coarse_iters = 50000;
  int fine_iters = 15000;
  int batch = 2048;
  double lr = 1e-3;
  std::uint64_t seed = 0;
  int custom_layers = 18;
  int custom_width = 36;
  int pe_levels = 10;
  int table_level = 5;
  bool table_area_weight = false;
  int smooth_iters = 30;
  double smooth_lambda = 0.5;
  bool no_quantize = false;
  int workers = 0;
  int log_every = 100;
};

void apply_config_file(EncodeArgs& args) {
  if (args.config_path.empty()) return;
  std::ifstream in(args.config_path);
  if (!in) {
    throw CLI::ValidationError("--config", "cannot open '" + args.config_path + "'");
  }
  json cfg = json::parse(in, nullptr, true, true);  // allow comments
  auto get = [&cfg](const char* key, auto& out) {
    if (cfg.contains(key)) out = cfg.at(key).get<std::decay_t<decltype(out)>>();
  };
  get("preset", args.preset);
  get("coarse_iterations", args.coarse_iters);
  get("fine_iterations", args.fine_iters);
  get("batch_size", args.batch);
  get("base_lr", args.lr);
  get("seed", args.seed);
  get("custom_fine_layers", args.custom_layers);
  get("custom_fine_width", args.custom_width);
  get("positional_levels", args.pe_levels);
  get("table_level", args.table_level);
  get("table_weight_by_area", args.table_area_weight);
  get("fine_sampling", args.fine_sampling);
  get("smoothing_iterations", args.smooth_iters);
  get("smoothing_lambda", args.smooth_lambda);
  get("workers", args.workers);
  if (cfg.contains("quantize")) args.no_quantize = !cfg.at("quantize").get<bool>();
}

struct ProgressState {
  std::FILE* stream = stdout;
  std::FILE* owned = nullptr;
  int log_every = 100;
  std::string last_stage;

  ~ProgressState() {
    if (owned) std::fclose(owned);
  }
};

void progress_callback(const char* stage, int32_t iteration, int32_t total, double loss,
                       double lr, void* user_data) {
  auto* state = static_cast<ProgressState*>(user_data);
  if (state->last_stage != stage) {
    state->last_stage = stage;
    std::cerr << "[stage] " << stage << "\n";
  }
  if (total <= 0) return;
  if (iteration % state->log_every != 0 && iteration != total) return;
  std::fprintf(state->stream, "stage=%s iter=%d total=%d loss=%.6e lr=%.6e\n", stage, iteration,
               total, loss, lr);
  std::fflush(state->stream);
}

long file_size(const std::string& path) {
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  return in ? static_cast<long>(in.tellg()) : -1;
}

int run_encode(const EncodeArgs& args) {
  hns_mesh* mesh = nullptr;
  hns_status status = hns_mesh_load(args.input.c_str(), &mesh);
  if (status != HNS_OK) return fail(status, "loading '" + args.input + "'");
  std::cerr << "loaded " << args.input << ": " << hns_mesh_vertex_count(mesh) << " vertices, "
            << hns_mesh_face_count(mesh) << " faces\n";

  hns_mesh* sphere = nullptr;
  if (!args.import_sphere.empty()) {
    status = hns_mesh_load(args.import_sphere.c_str(), &sphere);
    if (status != HNS_OK) {
      hns_mesh_free(mesh);
      return fail(status, "loading sphere '" + args.import_sphere + "'");
    }
  }

  hns_encode_config config;
  hns_encode_config_init(&config);
  config.coarse_iterations = args.coarse_iters;
  config.fine_iterations = args.fine_iters;
  config.batch_size = args.batch;
  config.base_lr = args.lr;
  config.seed = args.seed;
  config.preset = args.preset.c_str();
  config.custom_fine_layers = args.custom_layers;
  config.custom_fine_width = args.custom_width;
  config.positional_levels = args.pe_levels;
  config.table_level = args.table_level;
  config.table_weight_by_area = args.table_area_weight ? 1 : 0;
  config.fine_sampling_uniform = args.fine_sampling == "uniform" ? 1 : 0;
  config.smoothing_iterations = args.smooth_iters;
  config.smoothing_lambda = args.smooth_lambda;
  config.quantize = args.no_quantize ? 0 : 1;
  config.workers = args.workers;

  ProgressState progress;
  progress.log_every = args.log_every > 0 ? args.log_every : 100;
  if (!args.progress_log.empty()) {
    progress.owned = std::fopen(args.progress_log.c_str(), "w");
    if (!progress.owned) {
      hns_mesh_free(mesh);
      hns_mesh_free(sphere);
      std::cerr << "hnsc: cannot open progress log '" << args.progress_log << "'\n";
      return static_cast<int>(HNS_ERROR_IO);
    }
    progress.stream = progress.owned;
  }

  hns_encode_stats stats;
  hns_model* model = nullptr;
  status = hns_encode(mesh, &config, sphere, progress_callback, &progress, &stats, &model);
  hns_mesh_free(mesh);
  hns_mesh_free(sphere);
  if (status != HNS_OK) return fail(status, "encoding");

  status = hns_model_save(model, args.output.c_str());
  if (status != HNS_OK) {
    hns_model_free(model);
    return fail(status, "writing '" + args.output + "'");
  }
  hns_model_free(model);

  std::cerr << "timings: parameterize " << stats.parameterize_seconds << " s, coarse "
            << stats.coarse_seconds << " s, table " << stats.table_seconds << " s, fine "
            << stats.fine_seconds << " s\n";
  std::cerr << "final losses: coarse " << stats.final_coarse_loss << ", fine "
            << stats.final_fine_loss << "\n";
  std::cerr << "wrote " << args.output << " (" << file_size(args.output) << " bytes)\n";
  return 0;
}

int run_decode(const std::string& model_path, const std::string& output, int level, bool adaptive,
               double threshold, int max_rounds, bool coarse_only, int workers) {
  hns_model* model = nullptr;
  hns_status status = hns_model_load(model_path.c_str(), &model);
  if (status != HNS_OK) return fail(status, "loading '" + model_path + "'");

  hns_decode_options options;
  hns_decode_options_init(&options);
  options.level = level;
  options.adaptive = adaptive ? 1 : 0;
  options.ratio_threshold = threshold;
  options.max_rounds = max_rounds;
  options.apply_displacement = coarse_only ? 0 : 1;
  options.workers = workers;

  auto t0 = std::chrono::steady_clock::now();
  hns_mesh* mesh = nullptr;
  status = hns_decode(model, &options, &mesh);
  hns_model_free(model);
  if (status != HNS_OK) return fail(status, "decoding");
  double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  status = hns_mesh_save(mesh, output.c_str());
  if (status != HNS_OK) {
    hns_mesh_free(mesh);
    return fail(status, "writing '" + output + "'");
  }
  std::cerr << "decoded " << hns_mesh_vertex_count(mesh) << " vertices, "
            << hns_mesh_face_count(mesh) << " faces in " << seconds << " s\n";
  std::cerr << "wrote " << output << "\n";
  hns_mesh_free(mesh);
  return 0;
}

int run_eval(const std::string& recon_path, const std::string& reference_path, std::uint64_t n,
             std::uint64_t seed, const std::string& direction, bool no_normalize,
             const std::string& json_path) {
  hns_mesh* recon = nullptr;
  hns_status status = hns_mesh_load(recon_path.c_str(), &recon);
  if (status != HNS_OK) return fail(status, "loading '" + recon_path + "'");
  hns_mesh* reference = nullptr;
  status = hns_mesh_load(reference_path.c_str(), &reference);
  if (status != HNS_OK) {
    hns_mesh_free(recon);
    return fail(status, "loading '" + reference_path + "'");
  }

  int dir = direction == "recon-to-ref" ? 0 : direction == "ref-to-recon" ? 1 : 2;
  double d_pm = 0.0, d_n = 0.0;
  status = hns_eval(recon, reference, n, seed, dir, no_normalize ? 0 : 1, &d_pm, &d_n);
  hns_mesh_free(recon);
  hns_mesh_free(reference);
  if (status != HNS_OK) return fail(status, "evaluating");

  std::printf("%.2f / %.2f\n", d_pm * 1e4, d_n);
  std::cerr << "d_pm " << d_pm << " (x10^4: " << d_pm * 1e4 << "), d_n " << d_n << " deg, n=" << n
            << ", direction=" << direction << (no_normalize ? "" : ", normalized by reference")
            << "\n";

  if (!json_path.empty()) {
    json record = {{"recon", recon_path},
                   {"reference", reference_path},
                   {"n", n},
                   {"seed", seed},
                   {"direction", direction},
                   {"normalized", !no_normalize},
                   {"d_pm", d_pm},
                   {"d_pm_x1e4", d_pm * 1e4},
                   {"d_n_degrees", d_n}};
    std::ofstream out(json_path);
    if (!out) {
      std::cerr << "hnsc: cannot write '" << json_path << "'\n";
      return static_cast<int>(HNS_ERROR_IO);
    }
    out << record.dump(2) << "\n";
  }
  return 0;
}

int run_info(const std::string& model_path) {
  hns_model* model = nullptr;
  hns_status status = hns_model_load(model_path.c_str(), &model);
  if (status != HNS_OK) return fail(status, "loading '" + model_path + "'");
  hns_model_info info;
  status = hns_model_get_info(model, &info);
  hns_model_free(model);
  if (status != HNS_OK) return fail(status, "reading info");

  std::printf("container: %s (%llu bytes total)\n", model_path.c_str(),
              static_cast<unsigned long long>(info.total_bytes));
  std::printf("quantized: %s\n", info.quantized ? "yes (fp16)" : "no (fp32)");
  std::printf("q_c: %dx%d, input dim %d, PE levels %d, params %llu, payload %llu bytes\n",
              info.coarse_hidden_layers, info.coarse_hidden_width, info.coarse_input_dim,
              info.coarse_positional_levels,
              static_cast<unsigned long long>(info.coarse_parameter_count),
              static_cast<unsigned long long>(info.coarse_payload_bytes));
  std::printf("q_f: %dx%d, input dim %d, PE levels %d, params %llu, payload %llu bytes\n",
              info.fine_hidden_layers, info.fine_hidden_width, info.fine_input_dim,
              info.fine_positional_levels,
              static_cast<unsigned long long>(info.fine_parameter_count),
              static_cast<unsigned long long>(info.fine_payload_bytes));
  std::printf("header: %llu bytes\n", static_cast<unsigned long long>(info.header_bytes));
  std::printf("smoothing: c=%d lambda=%g\n", info.smoothing_iterations, info.smoothing_lambda);
  std::printf("normalization: scale %g offset (%g, %g, %g)\n", info.scale, info.offset[0],
              info.offset[1], info.offset[2]);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string("hnsc ") + hns_version() +
               " - hierarchical neural surface codec for genus-0 meshes"};
  app.require_subcommand(1);

  EncodeArgs enc;
  // the config file seeds defaults, so explicit flags win; find it before the
  // real parse
  for (int i = 1; i < argc; ++i) {
    std::string arg = argv[i];
    if (arg == "--config" && i + 1 < argc) enc.config_path = argv[i + 1];
    else if (arg.rfind("--config=", 0) == 0) enc.config_path = arg.substr(9);
  }
  if (!enc.config_path.empty()) {
    try {
      apply_config_file(enc);
    } catch (const json::exception& e) {
      std::cerr << "hnsc: config error: " << e.what() << "\n";
      return static_cast<int>(HNS_ERROR_PARSE);
    } catch (const CLI::Error& e) {
      std::cerr << "hnsc: " << e.what() << "\n";
      return static_cast<int>(HNS_ERROR_IO);
    }
  }
  CLI::App* encode = app.add_subcommand("encode", "compress a mesh into a .hnsc container");
  encode->add_option("input", enc.input, "input mesh (.obj/.ply)")->required();
  encode->add_option("output", enc.output, "output container (.hnsc)")->required();
  encode->add_option("--config", enc.config_path, "JSON config file (flags override it)");
  encode->add_option("--preset", enc.preset, "target size: 50KB, 85KB, 165KB, 260KB, custom");
  encode->add_option("--coarse-iters", enc.coarse_iters, "coarse training iterations");
  encode->add_option("--fine-iters", enc.fine_iters, "fine training iterations");
  encode->add_option("--batch", enc.batch, "batch size");
  encode->add_option("--lr", enc.lr, "base learning rate (cosine annealed)");
  encode->add_option("--seed", enc.seed, "RNG seed");
  encode->add_option("--custom-layers", enc.custom_layers, "q_f hidden layers (preset=custom)");
  encode->add_option("--custom-width", enc.custom_width, "q_f hidden width (preset=custom)");
  encode->add_option("--pe-levels", enc.pe_levels, "positional encoding levels for q_f");
  encode->add_option("--table-level", enc.table_level, "icosphere level for the distortion table");
  encode->add_flag("--table-area-weight", enc.table_area_weight,
                   "multiply table weights by true face area");
  encode->add_option("--fine-sampling", enc.fine_sampling,
                     "fine-stage sampling: table (default) or uniform");
  encode->add_option("--smooth-iters", enc.smooth_iters, "Laplacian smoothing iterations (c)");
  encode->add_option("--smooth-lambda", enc.smooth_lambda, "Laplacian smoothing factor");
  encode->add_flag("--no-quantize", enc.no_quantize, "store fp32 parameters instead of fp16");
  encode->add_option("--import-sphere", enc.import_sphere,
                     "OBJ/PLY with a precomputed spherical embedding (same connectivity)");
  encode->add_option("--workers", enc.workers, "worker threads (0 = hardware)");
  encode->add_option("--log-every", enc.log_every, "progress record interval");
  encode->add_option("--progress-log", enc.progress_log,
                     "write progress records to a file instead of stdout");

  std::string dec_model, dec_output;
  int dec_level = 6, dec_max_rounds = 3, dec_workers = 0;
  double dec_threshold = 4.0;
  bool dec_no_adaptive = false, dec_coarse_only = false;
  CLI::App* decode = app.add_subcommand("decode", "reconstruct a mesh from a container");
  decode->add_option("model", dec_model, "input container (.hnsc)")->required();
  decode->add_option("output", dec_output, "output mesh (.obj/.ply)")->required();
  decode->add_option("-k,--level", dec_level, "icosphere template level");
  decode->add_flag("--no-adaptive", dec_no_adaptive, "disable adaptive refinement");
  decode->add_option("--threshold", dec_threshold, "area ratio that triggers refinement");
  decode->add_option("--max-rounds", dec_max_rounds, "refinement round cap");
  decode->add_flag("--coarse-only", dec_coarse_only, "skip the displacement network");
  decode->add_option("--workers", dec_workers, "worker threads (0 = hardware)");

  std::string eval_recon, eval_reference, eval_direction = "symmetric", eval_json;
  std::uint64_t eval_n = 100000, eval_seed = 0;
  bool eval_no_normalize = false;
  CLI::App* eval = app.add_subcommand("eval", "point-to-mesh and normal error between meshes");
  eval->add_option("recon", eval_recon, "reconstruction mesh")->required();
  eval->add_option("reference", eval_reference, "reference mesh")->required();
  eval->add_option("-n,--samples", eval_n, "surface samples per direction");
  eval->add_option("--seed", eval_seed, "RNG seed");
  eval->add_option("--direction", eval_direction, "symmetric, recon-to-ref, or ref-to-recon");
  eval->add_flag("--no-normalize", eval_no_normalize,
                 "compare in raw model units instead of the reference's unit-diagonal frame");
  eval->add_option("--json", eval_json, "also write a JSON record");

  std::string info_model;
  CLI::App* info = app.add_subcommand("info", "print container metadata");
  info->add_option("model", info_model, "container (.hnsc)")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (encode->parsed()) {
      return run_encode(enc);
    }
    if (decode->parsed()) {
      return run_decode(dec_model, dec_output, dec_level, !dec_no_adaptive, dec_threshold,
                        dec_max_rounds, dec_coarse_only, dec_workers);
    }
    if (eval->parsed()) {
      return run_eval(eval_recon, eval_reference, eval_n, eval_seed, eval_direction,
                      eval_no_normalize, eval_json);
    }
    if (info->parsed()) {
      return run_info(info_model);
    }
  } catch (const json::exception& e) {
    std::cerr << "hnsc: config error: " << e.what() << "\n";
    return static_cast<int>(HNS_ERROR_PARSE);
  } catch (const CLI::Error& e) {
    std::cerr << "hnsc: " << e.what() << "\n";
    return static_cast<int>(HNS_ERROR_INVALID_ARGUMENT);
  }
  return 0;
}
