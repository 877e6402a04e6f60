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

#include "dynclust/stream.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

namespace dynclust {

std::vector<StreamOp> ParseStream(std::istream& in) {
  std::vector<StreamOp> ops;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream tokens(line);
    std::string head;
    if (!(tokens >> head) || head[0] == '#') continue;
    StreamOp op{StreamOp::Kind::kInsert, {}, line_no};
    if (head == "+" || head == "-") {
      op.kind = head == "+" ? StreamOp::Kind::kInsert : StreamOp::Kind::kDelete;
      if (!(tokens >> op.key)) throw StreamError(line_no, "missing point key");
    } else if (head == "?v") {
      op.kind = StreamOp::Kind::kQueryValue;
    } else if (head == "?s") {
      op.kind = StreamOp::Kind::kQuerySolution;
    } else {
      throw StreamError(line_no, "unknown operation '" + head + "'");
    }
    std::string extra;
    if (tokens >> extra) throw StreamError(line_no, "trailing text '" + extra + "'");
    ops.push_back(std::move(op));
  }
  return ops;
}

void WriteStream(std::ostream& out, const std::vector<StreamOp>& ops) {
  for (const StreamOp& op : ops) {
    switch (op.kind) {
      case StreamOp::Kind::kInsert:
        out << "+ " << op.key << '\n';
        break;
      case StreamOp::Kind::kDelete:
        out << "- " << op.key << '\n';
        break;
      case StreamOp::Kind::kQueryValue:
        out << "?v\n";
        break;
      case StreamOp::Kind::kQuerySolution:
        out << "?s\n";
        break;
    }
  }
}

void ValidateStream(const std::vector<StreamOp>& ops) {
  std::unordered_set<std::string> live;
  for (std::size_t i = 0; i < ops.size(); ++i) {
    const StreamOp& op = ops[i];
    const std::size_t line = op.line ? op.line : i + 1;
    if (op.kind == StreamOp::Kind::kInsert && !live.insert(op.key).second) {
      throw StreamError(line, "insert of live key '" + op.key + "'");
    }
    if (op.kind == StreamOp::Kind::kDelete && live.erase(op.key) == 0) {
      throw StreamError(line, "delete of key '" + op.key + "' that is not live");
    }
  }
}

char KindSymbol(StreamOp::Kind kind) {
  switch (kind) {
    case StreamOp::Kind::kInsert:
      return '+';
    case StreamOp::Kind::kDelete:
      return '-';
    case StreamOp::Kind::kQueryValue:
      return 'v';
    case StreamOp::Kind::kQuerySolution:
      return 's';
  }
  return '?';
}

const char* KindName(StreamOp::Kind kind) {
  switch (kind) {
    case StreamOp::Kind::kInsert:
      return "insert";
    case StreamOp::Kind::kDelete:
      return "delete";
    case StreamOp::Kind::kQueryValue:
      return "query_value";
    case StreamOp::Kind::kQuerySolution:
      return "query_solution";
  }
  return "unknown";
}

}  // namespace dynclust
