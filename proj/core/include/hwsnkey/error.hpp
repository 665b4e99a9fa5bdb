#pragma once

#include <stdexcept>
#include <string>

namespace hwsnkey {

// Invalid parameters or configuration (bad ring sizes, non-prime modulus, ...).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Fewer than t+1 distinct shares were supplied to reconstruction.
class UnderdeterminedError : public std::runtime_error {
 public:
  UnderdeterminedError(std::size_t have, std::size_t need)
      : std::runtime_error("underdetermined: " + std::to_string(have) +
                           " distinct shares, need " + std::to_string(need)),
        have_(have),
        need_(need) {}

  std::size_t have() const noexcept { return have_; }
  std::size_t need() const noexcept { return need_; }

 private:
  std::size_t have_;
  std::size_t need_;
};

// Shares disagree with every symmetric polynomial of the requested degree.
class InconsistentSharesError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input file (CSV, JSON).
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hwsnkey
