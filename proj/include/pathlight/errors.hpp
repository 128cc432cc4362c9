#pragma once

#include <stdexcept>

namespace pathlight {

/// Base class for every error this library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Frame-chain violations: composing mismatched frames, duplicate or cyclic
/// tree edges, lookups across disconnected components.
class FrameError : public Error {
 public:
  using Error::Error;
};

/// Malformed config or path text. Messages name the offending field or
/// record where possible.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Invalid numeric arguments: non-positive spacing, degenerate marker
/// dimensions, out-of-range intrinsics.
class ParamError : public Error {
 public:
  using Error::Error;
};

/// Geometric failures: points behind the lens, rays that never reach the
/// ground plane, undefined footprints.
class ProjectionError : public Error {
 public:
  using Error::Error;
};

/// Socket-level failures in the ingestion server.
class ServerError : public Error {
 public:
  using Error::Error;
};

}  // namespace pathlight
