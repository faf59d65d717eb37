#pragma once

#include <stdexcept>
#include <string>

namespace mtn {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A model that breaks a structural rule where an operation cannot proceed.
class ValidationError : public Error {
 public:
  ValidationError(std::string rule, std::string subject, const std::string& message)
      : Error(rule + " [" + subject + "]: " + message),
        rule_(std::move(rule)),
        subject_(std::move(subject)) {}

  const std::string& rule() const { return rule_; }
  const std::string& subject() const { return subject_; }

 private:
  std::string rule_;
  std::string subject_;
};

class VocabularyError : public Error {
 public:
  explicit VocabularyError(const std::string& label)
      : Error("unknown token class '" + label + "'"), label_(label) {}
  const std::string& label() const { return label_; }

 private:
  std::string label_;
};

class InconsistentOnsetError : public Error {
 public:
  InconsistentOnsetError(std::string chord_id, const std::string& message)
      : Error("onset mismatch at chord '" + chord_id + "': " + message),
        chord_id_(std::move(chord_id)) {}
  const std::string& chord_id() const { return chord_id_; }

 private:
  std::string chord_id_;
};

}  // namespace mtn
