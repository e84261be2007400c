#pragma once

#include "gkdv/errors.hpp"

namespace gkdv::lab {

class IoError : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace gkdv::lab
