// Acceptance gate: one self-contained check per release criterion, each
// printing a single [PASS]/[FAIL] line. Exit code = number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "pathlight/image_io.hpp"
#include "pathlight/marker.hpp"
#include "pathlight/path_io.hpp"
#include "pathlight/projector.hpp"
#include "pathlight/renderer.hpp"
#include "pathlight/resample.hpp"
#include "support/oracles.hpp"
#include "support/proc.hpp"

using namespace pathlight;

namespace {

constexpr double kPi = 3.14159265358979323846;
const std::string kRoot = PATHLIGHT_SOURCE_DIR;
const std::string kCli = PATHLIGHT_CLI;

int g_failures = 0;

void report(int index, const char* title, bool ok, const std::string& detail) {
  std::printf("[%s] criterion %d: %s%s%s\n", ok ? "PASS" : "FAIL", index,
              title, detail.empty() ? "" : " -- ", detail.c_str());
  if (!ok) ++g_failures;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

NavPath random_path(std::mt19937& rng) {
  std::uniform_int_distribution<int> count(5, 500);
  std::uniform_real_distribution<double> step(0.01, 1.0);
  std::uniform_real_distribution<double> turn(-0.7, 0.7);
  NavPath path;
  path.frame = "map";
  double x = 0, y = 0, heading = 0;
  const int n = count(rng);
  for (int i = 0; i < n; ++i) {
    path.poses.push_back({{x, y, 0.0}, {}});
    heading += turn(rng);
    const double s = step(rng);
    x += s * std::cos(heading);
    y += s * std::sin(heading);
  }
  return path;
}

RigidTransform pitched_mount(double x, double z, double pitch_down) {
  return compose(
      from_xyz_ypr(x, 0, z, 0, pitch_down, 0, "base_link", "mount"),
      from_xyz_ypr(0, 0, 0, -kPi / 2, 0, -kPi / 2, "mount", "projector_lens"));
}

RigidTransform nadir_mount(double h) {
  return from_xyz_ypr(0, 0, h, 0, kPi, 0, "base_link", "projector_lens");
}

ProjectorConfig make_config(int w, int h, double f, double cx, double cy,
                            const RigidTransform& mount) {
  ProjectorConfig cfg;
  cfg.intrinsics = {w, h, f, f, cx, cy, std::nullopt};
  cfg.mount = mount;
  cfg.throw_min_m = 0.99;
  cfg.throw_max_m = 10.98;
  return cfg;
}

const RigidTransform kRobot = RigidTransform::identity("map", "base_link");

// ---------------------------------------------------------------------------

void criterion_1_resample_oracle() {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937 rng(20260814);
  std::uniform_real_distribution<double> spacing(0.1, 2.0);
  std::uniform_real_distribution<double> diameter(0.0, 1.0);

  std::string detail;
  bool ok = true;
  for (int trial = 0; trial < 1000 && ok; ++trial) {
    const NavPath path = random_path(rng);
    const double d = spacing(rng);
    const double circ = diameter(rng);
    const AnchorList anchors = resample(path, {d, circ});
    const auto expect = oracle::resample_indices(path, d, circ);

    if (anchors.size() != expect.size()) {
      ok = false;
      detail = "anchor count mismatch on trial " + std::to_string(trial);
      break;
    }
    for (std::size_t k = 0; k < expect.size(); ++k) {
      const Point3& want = path.poses[expect[k]].position;
      if (anchors[k].position.x != want.x || anchors[k].position.y != want.y) {
        ok = false;
        detail = "anchor mismatch on trial " + std::to_string(trial);
        break;
      }
    }
    for (std::size_t k = 1; k < anchors.size() && ok; ++k) {
      const double gap =
          planar_distance(anchors[k].position, anchors[k - 1].position);
      if (gap < (k == 1 ? d + circ : d)) {
        ok = false;
        detail = "gap below threshold on trial " + std::to_string(trial);
      }
    }
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  if (ok && secs >= 5.0) {
    ok = false;
    detail = "took too long";
  }
  char timing[64];
  std::snprintf(timing, sizeof timing, "1000 paths in %.2f s", secs);
  report(1, "resampling equals the independent scan oracle", ok,
         ok ? timing : detail);
}

void criterion_2_worked_example() {
  NavPath path;
  path.frame = "map";
  for (int i = 0; i <= 10; ++i) path.poses.push_back({{i * 0.1, 0.0, 0.0}, {}});
  const AnchorList anchors = resample(path, {0.25, 0.2});
  const bool ok = anchors.size() == 3 && anchors[0].position.x == 1.0 &&
                  anchors[1].position.x == 0.5 && anchors[2].position.x == 0.2 &&
                  anchors[0].kind == AnchorKind::Destination;
  std::string got = "anchors:";
  for (const Anchor& a : anchors) {
    char buf[32];
    std::snprintf(buf, sizeof buf, " %.3g", a.position.x);
    got += buf;
  }
  report(2, "11-point worked example picks x = 1.0, 0.5, 0.2", ok, got);
}

void criterion_3_projection_round_trip() {
  const ProjectorConfig cfg = make_config(
      1280, 720, 2000, 639.5, 359.5, pitched_mount(0.12, 1.25, 0.8726646259971648));
  std::mt19937 rng(31337);
  std::uniform_real_distribution<double> uu(0.0, 1279.0);
  std::uniform_real_distribution<double> vv(0.0, 719.0);

  double worst_clean = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const Point3 p = unproject_to_ground(cfg, kRobot, {uu(rng), vv(rng)});
    const Point3 round =
        unproject_to_ground(cfg, kRobot, project_point(cfg, kRobot, p));
    worst_clean = std::max(worst_clean, (round - p).norm());
  }

  std::uniform_real_distribution<double> radial(-0.05, 0.05);
  std::uniform_real_distribution<double> tangential(-0.005, 0.005);
  double worst_distorted = 0.0;
  for (int set = 0; set < 20; ++set) {
    ProjectorConfig dcfg = cfg;
    dcfg.intrinsics.distortion = RadTanCoeffs{
        radial(rng), radial(rng), tangential(rng), tangential(rng), radial(rng)};
    for (int i = 0; i < 500; ++i) {
      const Point3 p = unproject_to_ground(dcfg, kRobot, {uu(rng), vv(rng)});
      const Point3 round =
          unproject_to_ground(dcfg, kRobot, project_point(dcfg, kRobot, p));
      worst_distorted = std::max(worst_distorted, (round - p).norm());
    }
  }

  char detail[96];
  std::snprintf(detail, sizeof detail,
                "worst: %.2e m clean, %.2e m distorted", worst_clean,
                worst_distorted);
  report(3, "projection round trip closes to 1e-9 (1e-6 distorted)",
         worst_clean < 1e-9 && worst_distorted < 1e-6, detail);
}

void criterion_4_collinearity() {
  const ProjectorConfig cfg = make_config(
      1280, 720, 2000, 639.5, 359.5, pitched_mount(0.12, 1.25, 0.8726646259971648));
  std::mt19937 rng(2718);
  std::uniform_real_distribution<double> uu(0.0, 1279.0);
  std::uniform_real_distribution<double> vv(0.0, 719.0);
  std::uniform_real_distribution<double> tt(0.1, 0.9);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const Point3 a = unproject_to_ground(cfg, kRobot, {uu(rng), vv(rng)});
    const Point3 b = unproject_to_ground(cfg, kRobot, {uu(rng), vv(rng)});
    const Point3 c = a + (b - a) * tt(rng);
    const PixelCoord pa = project_point(cfg, kRobot, a);
    const PixelCoord pb = project_point(cfg, kRobot, b);
    const PixelCoord pc = project_point(cfg, kRobot, c);
    worst = std::max(worst, std::abs((pb.u - pa.u) * (pc.v - pa.v) -
                                     (pb.v - pa.v) * (pc.u - pa.u)));
  }
  char detail[64];
  std::snprintf(detail, sizeof detail, "worst residual %.2e px^2", worst);
  report(4, "projected ground triples stay collinear", worst < 1e-6, detail);
}

void criterion_5_throw_numbers() {
  bool ok = true;
  std::string detail;
  for (const double h : {1.096, 1.491}) {
    const ThrowReport r =
        validate_throw(make_config(1280, 720, 2000, 639.5, 359.5,
                                   nadir_mount(h)),
                       kRobot);
    if (!r.ok()) {
      ok = false;
      detail = "height " + std::to_string(h) + " unexpectedly failed";
    }
  }
  const ThrowReport close = validate_throw(
      make_config(1280, 720, 2000, 639.5, 359.5, nadir_mount(0.5)), kRobot);
  if (close.status != ThrowStatus::TooClose ||
      close.message.find("below the minimum") == std::string::npos) {
    ok = false;
    detail = "0.5 m did not produce a too-close warning";
  }
  if (ok)
    detail = "1.096 m and 1.491 m in range, 0.5 m warns";
  report(5, "throw range checks reproduce the published mount heights", ok,
         detail);
}

void criterion_6_footprint_analytics() {
  bool ok = true;
  std::string detail;

  // Nadir closed form.
  const double h = 2.0, f = 500.0;
  const int W = 320, H = 180;
  const GroundFootprint nadir = ground_footprint(
      make_config(W, H, f, (W - 1) / 2.0, (H - 1) / 2.0, nadir_mount(h)),
      kRobot);
  if (std::abs(nadir.near_width_m - h * W / f) > 1e-9 ||
      std::abs(nadir.depth_m - h * H / f) > 1e-9 ||
      std::abs(nadir.area_m2 - (h * W / f) * (h * H / f)) > 1e-9) {
    ok = false;
    detail = "nadir closed form mismatch";
  }

  // Pitched case against the matrix ray-plane oracle.
  const double pitch = 40.0 * kPi / 180.0;
  const GroundFootprint pitched = ground_footprint(
      make_config(1280, 720, 1000, 640, 360, pitched_mount(0, 1.2, pitch)),
      kRobot);
  const oracle::RigidM lens = oracle::rigid_compose(
      oracle::rigid_from_xyz_ypr(0, 0, 1.2, 0, pitch, 0),
      oracle::rigid_from_xyz_ypr(0, 0, 0, -kPi / 2, 0, -kPi / 2));
  const double uv[4][2] = {
      {-0.5, -0.5}, {1279.5, -0.5}, {1279.5, 719.5}, {-0.5, 719.5}};
  for (int i = 0; i < 4 && ok; ++i) {
    const Vec3 want =
        oracle::pixel_to_ground(lens, 1000, 1000, 640, 360, uv[i][0], uv[i][1]);
    if ((pitched.corners[i] - want).norm() > 1e-9) {
      ok = false;
      detail = "pitched corner " + std::to_string(i) + " off oracle";
    }
  }

  // Repo sample rig: magnitude anchor and trapezoid shape.
  const ProjectorConfig sample = [&] {
    ProjectorConfig cfg = load_projector_config(
        slurp(kRoot + "/configs/projector_sample.json"));
    const TransformTree tree = load_transform_config(
        slurp(kRoot + "/configs/transforms_sample.json"));
    cfg.mount = tree.lookup("base_link", "projector_lens");
    return cfg;
  }();
  const GroundFootprint rig = ground_footprint(sample, kRobot);
  if (!(rig.area_m2 > 0.3 && rig.area_m2 < 3.0)) {
    ok = false;
    detail = "sample rig area out of the ~1 m^2 band";
  }
  if (!(rig.far_width_m > rig.near_width_m)) {
    ok = false;
    detail = "sample rig footprint is not a forward-opening trapezoid";
  }
  if (ok) {
    char buf[96];
    std::snprintf(buf, sizeof buf,
                  "sample rig %.2f m^2, widths %.2f -> %.2f m", rig.area_m2,
                  rig.near_width_m, rig.far_width_m);
    detail = buf;
  }
  report(6, "footprint matches closed form, oracle, and the rig magnitude",
         ok, detail);
}

void criterion_7_golden_frame() {
  const NavPath path =
      parse_path_text(slurp(kRoot + "/configs/paths/straight_11.json"));
  ProjectorConfig cfg =
      load_projector_config(slurp(kRoot + "/configs/projector_desk.json"));
  const TransformTree tree = load_transform_config(
      slurp(kRoot + "/configs/transforms_sample.json"));
  cfg.mount = tree.lookup("base_link", "projector_lens");
  const MarkerStyle style =
      load_style_config(slurp(kRoot + "/configs/style_default.json"));

  const AnchorList anchors = derive_headings(resample(path, {0.25, 0.2}));
  Scene scene;
  scene.robot_pose = kRobot;
  scene.background = style.background;
  scene.markers = markers_for_anchors(anchors, style, 0.2,
                                      lens_in_world(cfg, kRobot).translation);
  const Framebuffer frame = render_frame(scene, cfg);
  const std::vector<std::uint8_t> encoded = encode_ppm(frame);

  const std::string want = slurp(kRoot + "/tests/golden/sample_scene.ppm");
  const bool ok = !want.empty() && encoded.size() == want.size() &&
                  std::equal(encoded.begin(), encoded.end(), want.begin(),
                             [](std::uint8_t a, char b) {
                               return a == static_cast<std::uint8_t>(b);
                             });
  char detail[64];
  std::snprintf(detail, sizeof detail, "%zu bytes compared", encoded.size());
  report(7, "sample scene renders bit-identically to the frozen reference",
         ok, ok ? detail : "byte mismatch against tests/golden");
}

void criterion_8_end_to_end_serve() {
  const auto start = std::chrono::steady_clock::now();
  namespace fs = std::filesystem;
  const std::string out_dir = "/tmp/acceptance_serve";
  fs::remove_all(out_dir);
  fs::create_directories(out_dir);

  const std::string projector = kRoot + "/configs/projector_desk.json";
  const std::string transforms = kRoot + "/configs/transforms_sample.json";
  const std::string style = kRoot + "/configs/style_default.json";

  // Three distinct paths; the middle line is garbage the server must survive.
  const char* paths[3] = {
      R"({"frame":"map","poses":[{"p":[0,0,0]},{"p":[0.5,0,0]},{"p":[1.0,0,0]}]})",
      R"({"frame":"map","poses":[{"p":[0,0,0]},{"p":[0.4,0.3,0]},{"p":[0.8,0.6,0]}]})",
      R"({"frame":"map","poses":[{"p":[0,0,0]},{"p":[0.6,-0.3,0]},{"p":[1.2,-0.6,0]}]})"};

  testproc::Child server = testproc::spawn(
      {kCli, "serve", "--projector", projector, "--transforms", transforms,
       "--style", style, "-D", "0.25", "--circle-diameter", "0.2",
       "--listen", "127.0.0.1:0", "--out", out_dir, "--format", "ppm"},
      "acceptance_serve");

  bool ok = true;
  std::string detail;
  try {
    const std::string line =
        testproc::wait_for_line(server.stdout_path, "listening on ");
    const int port = std::stoi(line.substr(line.rfind(':') + 1));

    testproc::TcpClient client("127.0.0.1", port);
    const auto frame_name = [&](int i) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "/frame_%06d.ppm", i);
      return out_dir + buf;
    };
    const auto wait_frame = [&](int i) {
      const auto deadline =
          std::chrono::steady_clock::now() + std::chrono::milliseconds(1500);
      while (std::chrono::steady_clock::now() < deadline) {
        if (fs::exists(frame_name(i))) return true;
        std::this_thread::sleep_for(std::chrono::milliseconds(2));
      }
      return fs::exists(frame_name(i));
    };

    // Send each record only after the previous frame landed, so every valid
    // path produces exactly one frame, in order.
    client.send(std::string(paths[0]) + "\n");
    ok = ok && wait_frame(1);
    client.send("### not a path ###\n");
    client.send(std::string(paths[1]) + "\n");
    ok = ok && wait_frame(2);
    client.send(std::string(paths[2]) + "\n");
    ok = ok && wait_frame(3);
    client.close();
    if (!ok) detail = "server did not produce three frames";

    // Offline renders of the same three paths must match byte-for-byte.
    for (int i = 0; i < 3 && ok; ++i) {
      const std::string path_file =
          "/tmp/acceptance_path_" + std::to_string(i) + ".json";
      std::ofstream(path_file) << paths[i];
      const std::string offline =
          "/tmp/acceptance_offline_" + std::to_string(i) + ".ppm";
      testproc::Child render = testproc::spawn(
          {kCli, "render", path_file, "--projector", projector, "--transforms",
           transforms, "--style", style, "-D", "0.25", "--circle-diameter",
           "0.2", "--out", offline},
          "acceptance_render_" + std::to_string(i));
      if (testproc::wait_exit(render) != 0) {
        ok = false;
        detail = "offline render " + std::to_string(i) + " failed";
        break;
      }
      if (slurp(frame_name(i + 1)) != slurp(offline)) {
        ok = false;
        detail = "frame " + std::to_string(i + 1) +
                 " differs from its offline render";
      }
    }

    testproc::interrupt(server);
    const int rc = testproc::wait_exit(server);
    if (rc != 0) {
      ok = false;
      detail = "server exit code " + std::to_string(rc);
    }
    const std::string err = testproc::slurp(server.stderr_path);
    if (err.find("parse_error") == std::string::npos) {
      ok = false;
      detail = "malformed line was not logged";
    }
  } catch (const std::exception& e) {
    ok = false;
    detail = e.what();
    if (server.pid > 0) {
      testproc::interrupt(server);
      testproc::wait_exit(server);
    }
  }

  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  if (ok && secs >= 2.0) {
    ok = false;
    detail = "took too long";
  }
  if (ok) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "3 frames matched offline in %.2f s", secs);
    detail = buf;
  }
  report(8, "live serve matches offline renders and survives bad input", ok,
         detail);
}

void criterion_9_geometry_suite() {
  bool ok = true;
  std::string detail;

  // Compose/invert identities.
  std::mt19937 rng(55);
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  std::uniform_real_distribution<double> coord(-5.0, 5.0);
  double worst = 0.0;
  for (int i = 0; i < 500; ++i) {
    const RigidTransform t =
        from_xyz_ypr(coord(rng), coord(rng), coord(rng), angle(rng),
                     angle(rng), angle(rng), "a", "b");
    const RigidTransform round = compose(t, invert(t));
    worst = std::max(worst, round.translation.norm());
    worst = std::max(worst, round.rotation.angle_to(UnitQuaternion::identity()));
    const Point3 p{coord(rng), coord(rng), coord(rng)};
    worst = std::max(worst, (invert(t).apply(t.apply(p)) - p).norm());
  }
  if (worst >= 1e-12) {
    ok = false;
    detail = "compose/invert identity drift";
  }

  // Arrow vertices against an inline analytic construction, three headings.
  const ArrowDimensions dims{0.2, 0.1, 0.2, 0.2};
  for (const double heading : {0.0, kPi / 3, -2.1}) {
    const Point3 anchor{1.5, -0.5, 0.0};
    const GroundPolygon arrow = build_arrow(anchor, heading, dims, {});
    const double local[7][2] = {{0.0, -0.05}, {0.2, -0.05}, {0.2, -0.1},
                                {0.4, 0.0},   {0.2, 0.1},   {0.2, 0.05},
                                {0.0, 0.05}};
    const double c = std::cos(heading), s = std::sin(heading);
    for (int i = 0; i < 7; ++i) {
      const Point3 want{anchor.x + c * local[i][0] - s * local[i][1],
                        anchor.y + s * local[i][0] + c * local[i][1], 0.0};
      if ((arrow.vertices[i] - want).norm() > 1e-12) {
        ok = false;
        detail = "arrow vertex off the analytic construction";
      }
    }
  }

  // Disk n-gon area formula.
  for (const int n : {8, 64, 256}) {
    const GroundPolygon disk = build_disk({0.3, 0.7, 0}, 0.3, n, {});
    const double want = n / 2.0 * 0.15 * 0.15 * std::sin(2 * kPi / n);
    if (std::abs(polygon_signed_area(disk.vertices) - want) > 1e-12) {
      ok = false;
      detail = "disk area off the n-gon formula (n=" + std::to_string(n) + ")";
    }
  }

  if (ok) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "worst identity drift %.2e", worst);
    detail = buf;
  }
  report(9, "geometry identities, arrow vertices, disk areas", ok, detail);
}

}  // namespace

int main() {
  criterion_1_resample_oracle();
  criterion_2_worked_example();
  criterion_3_projection_round_trip();
  criterion_4_collinearity();
  criterion_5_throw_numbers();
  criterion_6_footprint_analytics();
  criterion_7_golden_frame();
  criterion_8_end_to_end_serve();
  criterion_9_geometry_suite();

  if (g_failures == 0)
    std::printf("all 9 acceptance criteria passed\n");
  else
    std::printf("%d acceptance criteria FAILED\n", g_failures);
  return g_failures;
}
