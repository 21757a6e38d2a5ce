#pragma once

#include <stdexcept>
#include <string>

namespace srts {

// Coordinate or time index outside the maze volume.
struct BoundsError : std::out_of_range {
  using std::out_of_range::out_of_range;
};

// Attempt to reserve a temporal-spatial cell that is already blocked.
struct ReservationConflict : std::logic_error {
  using std::logic_error::logic_error;
};

// instant_refresh called with a timestamp earlier than the current one.
struct TimeRegression : std::logic_error {
  using std::logic_error::logic_error;
};

// Malformed request data (bad trajectory, blocked source, length mismatch...).
struct InputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Scenario configuration problem; `field` names the offending JSON path.
struct ConfigError : std::runtime_error {
  std::string field;

  ConfigError(std::string field_path, const std::string& message)
      : std::runtime_error(field_path.empty() ? message
                                              : field_path + ": " + message),
        field(std::move(field_path)) {}
};

// Filesystem / serialization failure while emitting or reading artifacts.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace srts
