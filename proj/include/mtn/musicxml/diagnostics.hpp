#pragma once

#include <string>
#include <utility>
#include <vector>

#include "mtn/error.hpp"

namespace mtn::musicxml {

/// Something in the source that was dropped or approximated.
struct Warning {
  std::string path;  // e.g. "P1/m3/note[2]/notations/glissando"
  std::string message;
  bool operator==(const Warning&) const = default;
};

using Warnings = std::vector<Warning>;

/// Input the converter cannot turn into a valid work.
class ConversionError : public Error {
 public:
  ConversionError(std::string path, const std::string& message)
      : Error(path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

}  // namespace mtn::musicxml
