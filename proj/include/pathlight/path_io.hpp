#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "pathlight/resample.hpp"

namespace pathlight {

/// One path record as it travels over the wire or sits in a file.
struct PathMessage {
  std::uint64_t sequence_number = 0;
  NavPath path;
};

/// Parse one path record:
///   {"frame": "map", "poses": [{"p": [x, y, z], "q": [qx, qy, qz, qw]}, ...]}
/// "q" is optional and defaults to identity. Throws ParseError naming the
/// offending pose index for malformed text, wrong arity, non-finite numbers,
/// or a non-unit quaternion.
NavPath parse_path_text(std::string_view text);

/// Same schema plus an optional "seq" field (defaults to 0; the server
/// assigns its own sequence when absent).
PathMessage parse_path_message(std::string_view text);
bool path_message_has_seq(std::string_view text);

/// Inverse of parse_path_text. Identity orientations are omitted, so
/// serialize(parse(x)) == serialize(parse(serialize(parse(x)))).
std::string serialize_path(const NavPath& path);

/// Read a whole file and parse it as a single path record.
NavPath load_path_file(const std::string& filename);

}  // namespace pathlight
