#include "pathlight/path_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "pathlight/errors.hpp"

namespace pathlight {

using nlohmann::json;

namespace {

std::string pose_label(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "poses[%zu]", i);
  return buf;
}

double finite_number(const json& v, const std::string& where) {
  if (!v.is_number())
    throw ParseError(where + ": expected a number, got " +
                     std::string(v.type_name()));
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ParseError(where + ": non-finite number");
  return d;
}

json parse_root(std::string_view text) {
  json root = json::parse(text, nullptr, false);
  if (root.is_discarded())
    throw ParseError("malformed path record: not valid JSON");
  if (!root.is_object())
    throw ParseError("malformed path record: expected a JSON object");
  return root;
}

NavPath path_from_json(const json& root) {
  NavPath out;
  if (!root.contains("frame") || !root["frame"].is_string())
    throw ParseError("path record: missing string field 'frame'");
  out.frame = root["frame"].get<std::string>();
  if (out.frame.empty()) throw ParseError("path record: 'frame' is empty");

  if (!root.contains("poses") || !root["poses"].is_array())
    throw ParseError("path record: missing array field 'poses'");
  const json& poses = root["poses"];
  out.poses.reserve(poses.size());
  for (std::size_t i = 0; i < poses.size(); ++i) {
    const json& pose = poses[i];
    const std::string label = pose_label(i);
    if (!pose.is_object())
      throw ParseError(label + ": expected an object");
    if (!pose.contains("p") || !pose["p"].is_array() || pose["p"].size() != 3)
      throw ParseError(label + ": 'p' must be an array of 3 numbers");
    PathPose parsed;
    parsed.position = {finite_number(pose["p"][0], label + ".p[0]"),
                       finite_number(pose["p"][1], label + ".p[1]"),
                       finite_number(pose["p"][2], label + ".p[2]")};
    if (pose.contains("q")) {
      if (!pose["q"].is_array() || pose["q"].size() != 4)
        throw ParseError(label + ": 'q' must be an array of 4 numbers");
      try {
        parsed.orientation = UnitQuaternion::from_components(
            finite_number(pose["q"][0], label + ".q[0]"),
            finite_number(pose["q"][1], label + ".q[1]"),
            finite_number(pose["q"][2], label + ".q[2]"),
            finite_number(pose["q"][3], label + ".q[3]"));
      } catch (const ParamError& e) {
        throw ParseError(label + ": " + e.what());
      }
    }
    out.poses.push_back(parsed);
  }
  return out;
}

}  // namespace

NavPath parse_path_text(std::string_view text) {
  return path_from_json(parse_root(text));
}

PathMessage parse_path_message(std::string_view text) {
  const json root = parse_root(text);
  PathMessage msg;
  if (root.contains("seq")) {
    if (!root["seq"].is_number_unsigned())
      throw ParseError("path record: 'seq' must be a non-negative integer");
    msg.sequence_number = root["seq"].get<std::uint64_t>();
  }
  msg.path = path_from_json(root);
  return msg;
}

bool path_message_has_seq(std::string_view text) {
  const json root = json::parse(text, nullptr, false);
  return root.is_object() && root.contains("seq");
}

std::string serialize_path(const NavPath& path) {
  json poses = json::array();
  const UnitQuaternion identity;
  for (const PathPose& pose : path.poses) {
    json entry;
    entry["p"] = {pose.position.x, pose.position.y, pose.position.z};
    if (pose.orientation.angle_to(identity) > 0.0)
      entry["q"] = {pose.orientation.x(), pose.orientation.y(),
                    pose.orientation.z(), pose.orientation.w()};
    poses.push_back(std::move(entry));
  }
  json root;
  root["frame"] = path.frame;
  root["poses"] = std::move(poses);
  return root.dump();
}

NavPath load_path_file(const std::string& filename) {
  std::ifstream in(filename, std::ios::binary);
  if (!in) throw ParseError("cannot open path file '" + filename + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_path_text(buf.str());
  } catch (const ParseError& e) {
    throw ParseError(filename + ": " + e.what());
  }
}

}  // namespace pathlight
