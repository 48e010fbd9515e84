#include <CLI11.hpp>

#include <atomic>
#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <pthread.h>
#include <string>
#include <thread>
#include <vector>

#include "settings.hpp"
#include "visrec/visrec.hpp"

namespace fs = std::filesystem;
using namespace visrec;
using visrec::cli::OutputFormat;
using visrec::cli::Settings;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitIo = 2;
constexpr int kExitRemote = 3;
constexpr std::size_t kDefaultK = 5;

int exit_code_for(Errc code) {
  switch (code) {
    case Errc::invalid_argument:
      return kExitUsage;
    case Errc::connection_failed:
    case Errc::remote_status:
    case Errc::bad_response:
      return kExitRemote;
    default:
      return kExitIo;
  }
}

Error usage(const std::string& what) { return Error(Errc::invalid_argument, what); }

std::string format_score(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", s);
  return buf;
}

CentroidClassifier load_classifier(const Settings& s) {
  if (!s.model) throw usage("a model is required (--model, VISREC_MODEL or 'model' in the config file)");
  if (!s.labels) throw usage("a label file is required (--labels, VISREC_LABELS or 'labels' in the config file)");
  CentroidClassifier clf;
  clf.load_model(*s.model, load_labels(*s.labels));
  clf.set_worker_count(s.workers);
  return clf;
}

// Unset k means "up to 5"; an explicit k must fit the label set.
std::size_t resolve_k(const std::optional<std::size_t>& k, std::size_t classes) {
  if (!k) return std::min(kDefaultK, classes);
  if (*k < 1 || *k > classes) {
    throw usage("k must lie in [1, " + std::to_string(classes) + "], got " + std::to_string(*k));
  }
  return *k;
}

void print_predictions(const std::vector<Prediction>& preds, const LabelSet& labels, OutputFormat format) {
  if (format == OutputFormat::tsv) {
    std::cout << "rank\tclass_index\tlabel\tscore\n";
    for (std::size_t i = 0; i < preds.size(); ++i) {
      std::cout << i + 1 << '\t' << preds[i].class_index << '\t' << labels[preds[i].class_index] << '\t'
                << format_score(preds[i].score) << '\n';
    }
    return;
  }
  for (std::size_t i = 0; i < preds.size(); ++i) {
    std::cout << i + 1 << ". " << labels[preds[i].class_index] << ' ' << format_score(preds[i].score) << '\n';
  }
}

struct Segmented {
  Image image;
  std::optional<Rect> rect;
  bool fallback = false;
};

std::optional<std::string> remote_url(const std::optional<std::string>& flag, const Settings& s) {
  if (!flag) return std::nullopt;
  if (!flag->empty()) return flag;
  if (!s.server) throw usage("--remote given without a URL and no server configured (VISREC_SERVER)");
  return s.server;
}

Segmented segment_any(const Image& img, const Settings& s, const std::optional<std::string>& remote) {
  if (remote) {
    auto r = client_segment(*remote, img);
    return {std::move(r.image), r.rect, r.fallback};
  }
  try {
    auto r = segment(img, s.segmentation);
    return {std::move(r.image), r.rect, false};
  } catch (const Error& e) {
    if (e.code() != Errc::no_object_found) throw;
    return {img, std::nullopt, true};
  }
}

void warn_fallback() { std::cerr << "warning: no object found; using the unsegmented image\n"; }

struct ClassifyArgs {
  std::string image;
  std::optional<std::size_t> k;
};

int cmd_classify(const Settings& s, const ClassifyArgs& a) {
  const auto clf = load_classifier(s);
  const auto k = resolve_k(a.k, clf.labels().size());
  print_predictions(clf.predict_top_k(load_image(a.image), k), clf.labels(), s.format);
  return kExitOk;
}

struct SegmentArgs {
  std::string image;
  std::string out;
  std::optional<std::string> remote;
};

int cmd_segment(const Settings& s, const SegmentArgs& a) {
  const Image img = load_image(a.image);
  const auto result = segment_any(img, s, remote_url(a.remote, s));
  save_image(result.image, a.out);
  if (result.fallback) warn_fallback();
  const Rect r = result.rect.value_or(Rect{0, 0, result.image.width(), result.image.height()});
  if (s.format == OutputFormat::tsv) {
    std::cout << "x\ty\tw\th\tfallback\n"
              << r.x << '\t' << r.y << '\t' << r.w << '\t' << r.h << '\t' << (result.fallback ? 1 : 0) << '\n';
  } else if (!result.fallback) {
    std::cout << "rect x=" << r.x << " y=" << r.y << " w=" << r.w << " h=" << r.h << '\n';
  }
  return kExitOk;
}

struct ClassifySegArgs {
  std::string image;
  std::optional<std::size_t> k;
  std::optional<std::string> remote;
};

int cmd_classify_seg(const Settings& s, const ClassifySegArgs& a) {
  const auto clf = load_classifier(s);
  const auto k = resolve_k(a.k, clf.labels().size());
  const Image img = load_image(a.image);
  const auto seg = segment_any(img, s, remote_url(a.remote, s));
  if (seg.fallback) warn_fallback();
  print_predictions(clf.predict_top_k(seg.image, k), clf.labels(), s.format);
  return kExitOk;
}

struct DiscoverArgs {
  std::string dir;
  std::optional<std::string> query;
  std::optional<std::size_t> k;
  std::size_t count = 5;
  std::size_t stride = 1;
  std::optional<std::string> out;
  bool ignore_case = false;
};

int cmd_discover(const Settings& s, const DiscoverArgs& a) {
  const auto clf = load_classifier(s);
  const auto k = resolve_k(a.k, clf.labels().size());
  const auto src = FrameSource::from_directory(a.dir);
  const auto extracted = extract_frames(src, a.count, a.stride);
  std::vector<Image> frames;
  for (const auto& f : extracted) frames.push_back(f.image);

  if (!a.query) {
    print_predictions(scan_top_objects(clf, frames, k), clf.labels(), s.format);
    return kExitOk;
  }
  if (a.query->empty()) throw usage("--query must not be empty");

  const auto r = discover(clf, frames, *a.query, {k, a.ignore_case});
  if (!r.found) {
    if (s.format == OutputFormat::tsv) {
      std::cout << "found\tframe_index\tframe\tclass_index\tlabel\tscore\n0\t\t\t\t\t\n";
    } else {
      std::cout << "not found: '" << *a.query << "' is not among the top-" << k << " labels of any frame\n";
    }
    return kExitOk;
  }

  const std::size_t index = extracted[r.frame_index].source_index;
  const fs::path& frame = src.frames[index];
  if (a.out) fs::copy_file(frame, *a.out, fs::copy_options::overwrite_existing);
  if (s.format == OutputFormat::tsv) {
    std::cout << "found\tframe_index\tframe\tclass_index\tlabel\tscore\n"
              << "1\t" << index << '\t' << frame.filename().string() << '\t' << r.class_index << '\t'
              << clf.labels()[r.class_index] << '\t' << format_score(r.score) << '\n';
  } else {
    std::cout << "found in frame " << index << " (" << frame.filename().string() << "): "
              << clf.labels()[r.class_index] << ' ' << format_score(r.score) << '\n';
    if (a.out) std::cout << "copied to " << *a.out << '\n';
  }
  return kExitOk;
}

struct CaptureArgs {
  std::string dir;
  std::string label;
  std::string out;
  std::size_t count = 5;
  std::size_t stride = 1;
};

int cmd_capture(const Settings& s, const CaptureArgs& a) {
  if (a.label.empty()) throw usage("--label must not be empty");
  CaptureOptions opts;
  opts.count = a.count;
  opts.stride = a.stride;
  const auto m = capture_views(FrameSource::from_directory(a.dir), a.label, a.out, opts);
  if (s.format == OutputFormat::tsv) {
    std::cout << "manifest\trows\n" << m.manifest_path.string() << '\t' << m.entries.size() << '\n';
  } else {
    std::cout << "wrote " << m.entries.size() << " images; manifest: " << m.manifest_path.string() << '\n';
  }
  return kExitOk;
}

struct ServeArgs {
  std::string host = "127.0.0.1";
  int port = 8080;
};

int cmd_serve(const Settings& s, const ServeArgs& a) {
  // Block termination signals before any thread starts; one thread waits for them.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  std::mutex log_mutex;
  const auto format = s.format;
  SegmentationServer server(s.segmentation, [&log_mutex, format](const RequestLogEntry& e) {
    const std::lock_guard lock(log_mutex);
    char ms[32];
    std::snprintf(ms, sizeof ms, "%.1f", e.millis);
    if (format == OutputFormat::tsv) {
      std::cout << e.method << '\t' << e.path << '\t' << e.status << '\t' << ms << std::endl;
    } else {
      std::cout << e.method << ' ' << e.path << ' ' << e.status << ' ' << ms << " ms" << std::endl;
    }
  });
  int port = 0;
  try {
    port = server.bind(a.host, a.port);
  } catch (const Error& e) {
    // A local bind failure is an I/O problem, not a remote one.
    std::cerr << "visrec: " << e.what() << '\n';
    return kExitIo;
  }
  std::cout << "listening on http://" << a.host << ':' << port << std::endl;

  std::atomic<bool> signalled = false;
  std::thread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    signalled = true;
    server.stop();
  });
  // Wakes the waiter when the server ends for any reason other than a signal.
  auto release_waiter = [&] {
    if (!signalled) pthread_kill(waiter.native_handle(), SIGTERM);
    waiter.join();
  };
  try {
    server.run();
  } catch (...) {
    release_waiter();
    throw;
  }
  release_waiter();
  std::cout << "stopped" << std::endl;
  return kExitOk;
}

struct TrainArgs {
  std::vector<std::string> manifests;
  std::string out;
  std::string labels_out;
};

int cmd_train(const Settings&, const TrainArgs& a) {
  LabelSet labels;
  std::map<std::string, std::size_t> index;
  std::vector<LabeledImage> samples;
  for (const auto& path : a.manifests) {
    const auto m = read_manifest(path);
    const auto base = m.manifest_path.parent_path();
    for (const auto& e : m.entries) {
      auto [it, fresh] = index.emplace(e.label, labels.size());
      if (fresh) labels.labels.push_back(e.label);
      samples.push_back({load_image(base / e.path), it->second});
    }
  }
  if (samples.empty()) throw Error(Errc::empty_input, "manifests list no images");
  const auto clf = train_reference_classifier(samples, labels);
  clf.save_model(a.out);
  {
    std::ofstream out(a.labels_out);
    for (const auto& l : labels.labels) out << l << '\n';
    if (!out) throw Error(Errc::unwritable_path, "cannot write " + a.labels_out);
  }
  std::cout << "trained " << labels.size() << " classes from " << samples.size() << " images\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Object recognition and segmentation toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "visrec 0.1.0");

  cli::FlagValues flags;
  app.add_option("--model", flags.model, "Centroid model file [env VISREC_MODEL]");
  app.add_option("--labels", flags.labels, "Label file, one class per line [env VISREC_LABELS]");
  app.add_option("--config", flags.config, "key = value config file [env VISREC_CONFIG]");
  app.add_option("--workers", flags.workers, "Classifier worker threads, default 4 [env VISREC_WORKERS]");
  app.add_option("--format", flags.format, "Output format: human or tsv [env VISREC_FORMAT]");
  app.add_option("--server", flags.server, "Segmentation server URL for --remote [env VISREC_SERVER]");

  const auto k_help = "Number of predictions (default 5, capped at the label count)";
  const auto remote_help = "Segment on a server; without a value uses --server / VISREC_SERVER";

  ClassifyArgs classify;
  auto* c = app.add_subcommand("classify", "Print the top-k classes of an image")->fallthrough();
  c->add_option("image", classify.image, "Input image")->required();
  c->add_option("-k", classify.k, k_help);

  SegmentArgs seg;
  auto* sg = app.add_subcommand("segment", "Segment the main object and write the result")->fallthrough();
  sg->add_option("image", seg.image, "Input image")->required();
  sg->add_option("-o,--out", seg.out, "Output image")->required();
  sg->add_option("--remote", seg.remote, remote_help)->expected(0, 1);

  ClassifySegArgs cseg;
  auto* cs = app.add_subcommand("classify-seg", "Segment first, then classify")->fallthrough();
  cs->add_option("image", cseg.image, "Input image")->required();
  cs->add_option("-k", cseg.k, k_help);
  cs->add_option("--remote", cseg.remote, remote_help)->expected(0, 1);

  DiscoverArgs disc;
  auto* d = app.add_subcommand("discover", "Find the frame showing an object, or list the scene's objects")
                ->fallthrough();
  d->add_option("frames", disc.dir, "Directory of frames, ordered by filename")->required();
  d->add_option("-q,--query", disc.query, "Label substring to look for");
  d->add_option("-k", disc.k, k_help);
  d->add_option("--count", disc.count, "Frames to extract")->capture_default_str()->check(CLI::PositiveNumber);
  d->add_option("--stride", disc.stride, "Frame stride")->capture_default_str()->check(CLI::PositiveNumber);
  d->add_option("-o,--out", disc.out, "Copy the best frame here");
  d->add_flag("-i,--ignore-case", disc.ignore_case, "Case-insensitive match");

  CaptureArgs cap;
  auto* cp = app.add_subcommand("capture", "Save frames as labelled training images")->fallthrough();
  cp->add_option("frames", cap.dir, "Directory of frames, ordered by filename")->required();
  cp->add_option("-l,--label", cap.label, "Object label")->required();
  cp->add_option("-o,--out", cap.out, "Output directory")->required();
  cp->add_option("--count", cap.count, "Frames to extract")->capture_default_str()->check(CLI::PositiveNumber);
  cp->add_option("--stride", cap.stride, "Frame stride")->capture_default_str()->check(CLI::PositiveNumber);

  ServeArgs serve;
  auto* sv = app.add_subcommand("serve", "Run the segmentation server")->fallthrough();
  sv->add_option("--host", serve.host, "Bind address")->capture_default_str();
  sv->add_option("--port", serve.port, "Port, 0 picks a free one")->capture_default_str()->check(CLI::Range(0, 65535));

  TrainArgs train;
  auto* tr = app.add_subcommand("train", "Fit a centroid model from capture manifests")->fallthrough();
  tr->add_option("manifests", train.manifests, "manifest.tsv files")->required();
  tr->add_option("-o,--out", train.out, "Model file to write")->required();
  tr->add_option("--labels-out", train.labels_out, "Label file to write")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    const Settings settings = cli::resolve_settings(flags);
    if (c->parsed()) return cmd_classify(settings, classify);
    if (sg->parsed()) return cmd_segment(settings, seg);
    if (cs->parsed()) return cmd_classify_seg(settings, cseg);
    if (d->parsed()) return cmd_discover(settings, disc);
    if (cp->parsed()) return cmd_capture(settings, cap);
    if (sv->parsed()) return cmd_serve(settings, serve);
    if (tr->parsed()) return cmd_train(settings, train);
  } catch (const Error& e) {
    std::cerr << "visrec: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "visrec: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitUsage;
}
