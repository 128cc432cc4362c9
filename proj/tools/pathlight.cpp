// pathlight: project a robot's planned path onto the ground ahead of it.
//
// Subcommands map to the pipeline stages: resample a path into marker
// anchors, render a frame for a path file, report the projector's ground
// footprint, validate the throw distance, or serve a TCP endpoint that
// renders a frame per received path.

#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "pathlight/errors.hpp"
#include "pathlight/geometry.hpp"
#include "pathlight/image_io.hpp"
#include "pathlight/log.hpp"
#include "pathlight/marker.hpp"
#include "pathlight/path_io.hpp"
#include "pathlight/projector.hpp"
#include "pathlight/renderer.hpp"
#include "pathlight/resample.hpp"
#include "pathlight/server.hpp"

namespace {

using namespace pathlight;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct CommonOptions {
  std::string projector_file;
  std::string transforms_file;
  std::string style_file;
  std::string base_frame = "base_link";
  std::string lens_frame = "projector_lens";
  ResampleParams resample;
};

ProjectorConfig load_projector(const CommonOptions& opt) {
  ProjectorConfig cfg = load_projector_config(read_file(opt.projector_file));
  if (!opt.transforms_file.empty()) {
    const TransformTree tree =
        load_transform_config(read_file(opt.transforms_file));
    cfg.mount = tree.lookup(opt.base_frame, opt.lens_frame);
  }
  return cfg;
}

MarkerStyle load_style(const CommonOptions& opt) {
  if (opt.style_file.empty()) return MarkerStyle{};
  return load_style_config(read_file(opt.style_file));
}

RigidTransform robot_pose_for(const std::string& world_frame,
                              const std::string& base_frame) {
  return RigidTransform::identity(world_frame.empty() ? "map" : world_frame,
                                  base_frame);
}

const char* anchor_kind_name(AnchorKind kind) {
  return kind == AnchorKind::Destination ? "destination" : "arrow";
}

Framebuffer render_path(const NavPath& path, const ProjectorConfig& cfg,
                        const MarkerStyle& style,
                        const ResampleParams& params) {
  AnchorList anchors = derive_headings(resample(path, params));
  const RigidTransform robot = robot_pose_for(path.frame, cfg.mount.parent_frame);
  const Point3 lens = lens_in_world(cfg, robot).translation;
  Scene scene;
  scene.markers = markers_for_anchors(anchors, style,
                                      params.destination_diameter_m, lens);
  scene.robot_pose = robot;
  scene.background = style.background;
  return render_frame(scene, cfg);
}

void print_footprint(const GroundFootprint& fp) {
  static const char* corner_names[4] = {"far_left", "far_right", "near_right",
                                        "near_left"};
  for (int i = 0; i < 4; ++i)
    std::printf("corner_%s %.6f %.6f %.6f\n", corner_names[i],
                fp.corners[i].x, fp.corners[i].y, fp.corners[i].z);
  std::printf("near_width_m %.6f\n", fp.near_width_m);
  std::printf("far_width_m %.6f\n", fp.far_width_m);
  std::printf("depth_m %.6f\n", fp.depth_m);
  std::printf("area_m2 %.6f\n", fp.area_m2);
}

int cmd_resample(const std::string& path_file, const ResampleParams& params) {
  const NavPath path = load_path_file(path_file);
  const AnchorList anchors = derive_headings(resample(path, params));
  for (const Anchor& a : anchors)
    std::printf("%s %.6f %.6f %.6f\n", anchor_kind_name(a.kind), a.position.x,
                a.position.y, a.heading_rad);
  return 0;
}

int cmd_render(const CommonOptions& opt, const std::string& path_file,
               const std::string& out, const std::string& format) {
  const ProjectorConfig cfg = load_projector(opt);
  const MarkerStyle style = load_style(opt);
  const NavPath path = load_path_file(path_file);

  const Framebuffer fb = render_path(path, cfg, style, opt.resample);
  if (format.empty())
    write_image(out, fb);
  else
    write_image(out, fb, image_format_from_name(format));
  std::printf("wrote %s (%dx%d)\n", out.c_str(), fb.width, fb.height);

  const RigidTransform robot = robot_pose_for(path.frame, cfg.mount.parent_frame);
  try {
    print_footprint(ground_footprint(cfg, robot));
  } catch (const ProjectionError& e) {
    std::printf("%s\n", e.what());
  }
  std::printf("%s\n", validate_throw(cfg, robot).message.c_str());
  return 0;
}

int cmd_footprint(const CommonOptions& opt) {
  const ProjectorConfig cfg = load_projector(opt);
  const RigidTransform robot = robot_pose_for("map", cfg.mount.parent_frame);
  print_footprint(ground_footprint(cfg, robot));
  return 0;
}

int cmd_validate(const CommonOptions& opt) {
  const ProjectorConfig cfg = load_projector(opt);
  const RigidTransform robot = robot_pose_for("map", cfg.mount.parent_frame);
  const ThrowReport report = validate_throw(cfg, robot);
  std::printf("%s\n", report.message.c_str());
  return report.ok() ? 0 : 3;
}

struct Endpoint {
  std::string host;
  std::uint16_t port = 0;
};

Endpoint parse_endpoint(const std::string& text) {
  const std::size_t colon = text.rfind(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 == text.size())
    throw ParamError("listen address must be host:port, got '" + text + "'");
  Endpoint ep;
  ep.host = text.substr(0, colon);
  const std::string port_text = text.substr(colon + 1);
  char* end = nullptr;
  const long port = std::strtol(port_text.c_str(), &end, 10);
  if (*end != '\0' || port < 0 || port > 65535)
    throw ParamError("invalid port '" + port_text + "'");
  ep.port = static_cast<std::uint16_t>(port);
  return ep;
}

int cmd_serve(const CommonOptions& opt, const std::string& listen,
              const std::string& out_dir, const std::string& format) {
  const ProjectorConfig cfg = load_projector(opt);
  const MarkerStyle style = load_style(opt);
  const ImageFormat fmt =
      format.empty() ? ImageFormat::Png : image_format_from_name(format);
  const char* extension = fmt == ImageFormat::Ppm ? "ppm" : "png";
  const Endpoint ep = parse_endpoint(listen);
  std::filesystem::create_directories(out_dir);

  // Block the shutdown signals before any thread exists so sigwait below is
  // the only receiver.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  LatestPathSlot slot;
  IngestServer server(ep.host, ep.port, slot);
  server.start();
  std::printf("listening on %s:%u\n", ep.host.c_str(), unsigned(server.port()));
  std::fflush(stdout);

  std::thread render_thread([&] {
    std::uint64_t last_version = 0;
    unsigned frame_index = 0;
    while (auto snap = slot.wait_newer(last_version)) {
      last_version = snap->version;
      char name[64];
      std::snprintf(name, sizeof name, "frame_%06u.%s", ++frame_index,
                    extension);
      const std::string out_path =
          (std::filesystem::path(out_dir) / name).string();
      try {
        write_image(out_path, render_path(snap->message.path, cfg, style,
                                          opt.resample), fmt);
        char detail[160];
        std::snprintf(detail, sizeof detail, "seq=%llu version=%llu -> %s",
                      static_cast<unsigned long long>(
                          snap->message.sequence_number),
                      static_cast<unsigned long long>(snap->version),
                      out_path.c_str());
        log_info("frame", detail);
      } catch (const Error& e) {
        --frame_index;  // nothing was written under this index
        log_error("render", e.what());
      }
    }
  });

  int sig = 0;
  sigwait(&signals, &sig);
  log_info("shutdown", sig == SIGINT ? "SIGINT" : "SIGTERM");
  server.stop();  // closes the slot; the render thread drains and exits
  render_thread.join();
  const ServerStats stats = server.stats();
  std::printf("served %llu connections, %llu records accepted, %llu rejected\n",
              static_cast<unsigned long long>(stats.connections),
              static_cast<unsigned long long>(stats.records_accepted),
              static_cast<unsigned long long>(stats.records_rejected));
  return 0;
}

void add_frame_flags(CLI::App* cmd, CommonOptions& opt) {
  cmd->add_option("--transforms", opt.transforms_file,
                  "Static transform config (JSON)");
  cmd->add_option("--base-frame", opt.base_frame,
                  "Robot base frame name in the transform config");
  cmd->add_option("--lens-frame", opt.lens_frame,
                  "Projector lens frame name in the transform config");
}

void add_resample_flags(CLI::App* cmd, CommonOptions& opt) {
  cmd->add_option("-D,--spacing", opt.resample.arrow_spacing_m,
                  "Arrow spacing D in meters");
  cmd->add_option("--circle-diameter", opt.resample.destination_diameter_m,
                  "Destination circle diameter in meters");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ground-projected navigation intent pipeline"};
  app.require_subcommand(1);

  CommonOptions opt;
  std::string path_file, out, format, listen = "127.0.0.1:0", out_dir = ".";

  CLI::App* resample_cmd =
      app.add_subcommand("resample", "Resample a path into marker anchors");
  resample_cmd->add_option("path", path_file, "Path file (JSON)")->required();
  add_resample_flags(resample_cmd, opt);

  CLI::App* render_cmd =
      app.add_subcommand("render", "Render one frame for a path file");
  render_cmd->add_option("path", path_file, "Path file (JSON)")->required();
  render_cmd->add_option("--projector", opt.projector_file,
                         "Projector calibration (JSON)")
      ->required();
  render_cmd->add_option("--style", opt.style_file, "Marker style (JSON)");
  render_cmd->add_option("--out", out, "Output image path")->required();
  render_cmd->add_option("--format", format, "png or ppm (default: from extension)");
  add_frame_flags(render_cmd, opt);
  add_resample_flags(render_cmd, opt);

  CLI::App* footprint_cmd =
      app.add_subcommand("footprint", "Report the illuminated ground region");
  footprint_cmd->add_option("--projector", opt.projector_file,
                            "Projector calibration (JSON)")
      ->required();
  add_frame_flags(footprint_cmd, opt);

  CLI::App* validate_cmd = app.add_subcommand(
      "validate", "Check the throw distance against the projector's range");
  validate_cmd->add_option("--projector", opt.projector_file,
                           "Projector calibration (JSON)")
      ->required();
  add_frame_flags(validate_cmd, opt);

  CLI::App* serve_cmd = app.add_subcommand(
      "serve", "Render a frame per path received on a TCP endpoint");
  serve_cmd->add_option("--projector", opt.projector_file,
                        "Projector calibration (JSON)")
      ->required();
  serve_cmd->add_option("--style", opt.style_file, "Marker style (JSON)");
  serve_cmd->add_option("--listen", listen, "host:port (port 0 = ephemeral)");
  serve_cmd->add_option("--out", out_dir, "Directory for rendered frames");
  serve_cmd->add_option("--format", format, "png or ppm");
  add_frame_flags(serve_cmd, opt);
  add_resample_flags(serve_cmd, opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;  // 0 covers --help and --version
  }

  try {
    if (resample_cmd->parsed()) return cmd_resample(path_file, opt.resample);
    if (render_cmd->parsed()) return cmd_render(opt, path_file, out, format);
    if (footprint_cmd->parsed()) return cmd_footprint(opt);
    if (validate_cmd->parsed()) return cmd_validate(opt);
    if (serve_cmd->parsed()) return cmd_serve(opt, listen, out_dir, format);
  } catch (const ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const ParamError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const FrameError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 0;
}
