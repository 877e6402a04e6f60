// Copyright 2026 The dynclust Authors.
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

#ifndef DYNCLUST_STREAM_HPP_
#define DYNCLUST_STREAM_HPP_

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace dynclust {

// One line of an update stream: `+ key`, `- key`, `?v` or `?s`.
struct StreamOp {
  enum class Kind { kInsert, kDelete, kQueryValue, kQuerySolution };
  Kind kind;
  std::string key;
  std::size_t line = 0;

  friend bool operator==(const StreamOp& a, const StreamOp& b) { return a.kind == b.kind && a.key == b.key; }
};

class StreamError : public std::runtime_error {
 public:
  StreamError(std::size_t line, const std::string& message)
      : std::runtime_error("stream line " + std::to_string(line) + ": " + message), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Blank lines and lines starting with '#' are skipped.
std::vector<StreamOp> ParseStream(std::istream& in);
void WriteStream(std::ostream& out, const std::vector<StreamOp>& ops);

// Deletes must name live keys and inserts fresh ones; throws StreamError.
void ValidateStream(const std::vector<StreamOp>& ops);

char KindSymbol(StreamOp::Kind kind);
const char* KindName(StreamOp::Kind kind);

}  // namespace dynclust

#endif  // DYNCLUST_STREAM_HPP_
