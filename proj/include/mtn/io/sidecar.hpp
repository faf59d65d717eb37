#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mtn/error.hpp"
#include "mtn/model.hpp"

namespace mtn {

/// Pixel rectangle; all components are non-negative.
struct Box {
  std::int64_t x = 0;
  std::int64_t y = 0;
  std::int64_t width = 0;
  std::int64_t height = 0;

  bool operator==(const Box&) const = default;
};

struct TextBox {
  Box box;
  std::string text;  // UTF-8, never a dynamic mark (those are tokens)

  bool operator==(const TextBox&) const = default;
};

struct Annotation {
  std::optional<Box> box;
  std::vector<TextBox> texts;
  std::map<std::string, std::string> extensions;

  bool operator==(const Annotation&) const = default;
};

/// Image-domain annotations keyed by work-level id (token, node or measure).
struct AnnotationSidecar {
  std::map<std::string, Annotation> records;

  bool operator==(const AnnotationSidecar&) const = default;
};

enum class SidecarErrorKind { Malformed, DanglingId, NegativeExtent, DynamicText };

class SidecarError : public Error {
 public:
  SidecarError(SidecarErrorKind kind, std::string subject, const std::string& message)
      : Error(message), kind_(kind), subject_(std::move(subject)) {}
  SidecarErrorKind kind() const { return kind_; }
  const std::string& subject() const { return subject_; }

 private:
  SidecarErrorKind kind_;
  std::string subject_;
};

AnnotationSidecar read_sidecar(std::string_view bytes, const Work& work);
std::string write_sidecar(const AnnotationSidecar& sidecar);

}  // namespace mtn
