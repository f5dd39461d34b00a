// Copyright 2026 The survgeo Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SURVGEO_ERROR_HPP
#define SURVGEO_ERROR_HPP

#include <stdexcept>
#include <string>

namespace survgeo {

/// Computational error categories. These surface through Error and map to
/// CLI exit code 1; input/parse problems use ParseError (exit code 2).
enum class Errc {
  NonPositiveDepth,
  CameraMismatch,
  DegenerateSize,
  AllInvalid,
  ConstantMap,
  DegenerateSurface,
  DimensionMismatch,
  MissingTerm,
  GimbalLock,
  ShapeMismatch,
  NonDivisibleSpatial,
  NoValidGroundTruth,
  InvalidTransform,
  InvalidArgument,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what),
        code_(code) {}

  Errc code() const { return code_; }
  const char* name() const { return errc_name(code_); }

 private:
  Errc code_;
};

/// I/O and config-file failures. `field` is a dotted path into the document
/// (e.g. "cameras[2].fx") so messages always name file and field.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& file, const std::string& field,
             const std::string& what)
      : std::runtime_error(file + ": " + (field.empty() ? "" : field + ": ") +
                           what),
        file_(file),
        field_(field) {}

  const std::string& file() const { return file_; }
  const std::string& field() const { return field_; }

 private:
  std::string file_;
  std::string field_;
};

}  // namespace survgeo

#endif  // SURVGEO_ERROR_HPP
