#ifndef KINETIC_ERRORS_HPP_
#define KINETIC_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace kinetic {

// Base class for all solver errors. Subclasses carry the failure site
// (node/stage index) in the message.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class NonPositiveDensity : public Error {
 public:
  explicit NonPositiveDensity(const std::string& what) : Error(what) {}
};

class NonPhysicalState : public Error {
 public:
  explicit NonPhysicalState(const std::string& what) : Error(what) {}
};

class TensorNotPD : public Error {
 public:
  TensorNotPD(const std::string& what, int node) : Error(what), node_(node) {}
  int node() const { return node_; }

 private:
  int node_;
};

class IncompatibleGrids : public Error {
 public:
  explicit IncompatibleGrids(const std::string& what) : Error(what) {}
};

class ZeroReference : public Error {
 public:
  explicit ZeroReference(const std::string& what) : Error(what) {}
};

class GridTooSmall : public Error {
 public:
  explicit GridTooSmall(const std::string& what) : Error(what) {}
};

class MalformedTableau : public Error {
 public:
  explicit MalformedTableau(const std::string& what) : Error(what) {}
};

class NotTypeII : public Error {
 public:
  explicit NotTypeII(const std::string& what) : Error(what) {}
};

// Wraps a failure inside an IMEX stage so callers see which stage broke.
class StepRejected : public Error {
 public:
  StepRejected(const std::string& what, int stage) : Error(what), stage_(stage) {}
  int stage() const { return stage_; }

 private:
  int stage_;
};

}  // namespace kinetic

#endif  // KINETIC_ERRORS_HPP_
