#ifndef GSO_ERROR_HPP
#define GSO_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gso {

class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& what, std::size_t line)
  : std::runtime_error("line " + std::to_string(line) + ": " + what)
  , line_(line)
  { }

  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

// A non-finite value appeared while evaluating a differentiable pipeline.
class NumericError : public std::runtime_error {
public:
  explicit NumericError(const std::string& stage)
  : std::runtime_error("non-finite value in " + stage)
  , stage_(stage)
  { }

  const std::string& stage() const { return stage_; }

private:
  std::string stage_;
};

class DivergenceError : public std::runtime_error {
public:
  DivergenceError(std::size_t step, const std::string& detail)
  : std::runtime_error("solve diverged at step " + std::to_string(step) + ": " + detail)
  , step_(step)
  { }

  std::size_t step() const { return step_; }

private:
  std::size_t step_;
};

}  // namespace gso

#endif  // GSO_ERROR_HPP
