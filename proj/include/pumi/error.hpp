#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace pumi {

/// Failure categories surfaced by the library. The CLI maps a subset of
/// these onto process exit codes.
enum class errc {
  empty_point_set,
  degenerate_geometry,
  too_few_points,
  out_of_domain,
  radius_exceeds_block,
  empty_cover,
  uncovered_sites,
  uncovered_point,
  duplicate_sites,
  ill_conditioned_patch,
  invalid_radius,
  invalid_argument,
  numerical_blowup,
  invalid_bracket,
  bisect_failure,
  io_error,
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::empty_point_set: return "EmptyPointSet";
    case errc::degenerate_geometry: return "DegenerateGeometry";
    case errc::too_few_points: return "TooFewPoints";
    case errc::out_of_domain: return "OutOfDomain";
    case errc::radius_exceeds_block: return "RadiusExceedsBlock";
    case errc::empty_cover: return "EmptyCover";
    case errc::uncovered_sites: return "UncoveredSites";
    case errc::uncovered_point: return "UncoveredPoint";
    case errc::duplicate_sites: return "DuplicateSites";
    case errc::ill_conditioned_patch: return "IllConditionedPatch";
    case errc::invalid_radius: return "InvalidRadius";
    case errc::invalid_argument: return "InvalidArgument";
    case errc::numerical_blowup: return "NumericalBlowup";
    case errc::invalid_bracket: return "InvalidBracket";
    case errc::bisect_failure: return "BisectError";
    case errc::io_error: return "IoError";
  }
  return "UnknownError";
}

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void raise(errc code, const std::string& what) { throw error(code, what); }

}  // namespace pumi
