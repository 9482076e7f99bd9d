// Copyright 2026 The urdfplus Authors
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

// Small non-validating XML reader. Every element remembers where it came
// from (line, column, byte span) so that diagnostics can point at it and
// uninterpreted elements can be written back byte for byte.

#ifndef URDFPLUS_XML_READER_H_
#define URDFPLUS_XML_READER_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace urdfplus::xml {

struct SourceLocation {
  int line = 1;
  int column = 1;
};

struct Attribute {
  std::string name;
  std::string value;
  SourceLocation location;
};

struct Element {
  std::string name;
  std::vector<Attribute> attributes;
  std::vector<Element> children;
  std::string text;  // concatenated character data, entities decoded
  SourceLocation location;
  std::size_t begin = 0;  // offset of '<'
  std::size_t end = 0;    // one past the closing '>'

  const Attribute* FindAttribute(std::string_view attr) const;
};

// Thrown on malformed input.
class SyntaxError : public std::exception {
 public:
  SyntaxError(std::string message, SourceLocation location)
      : message_(std::move(message)), location_(location) {}
  const char* what() const noexcept override { return message_.c_str(); }
  SourceLocation location() const { return location_; }

 private:
  std::string message_;
  SourceLocation location_;
};

// Parses a complete UTF-8 document and returns its root element.
Element Parse(std::string_view text);

}  // namespace urdfplus::xml

#endif  // URDFPLUS_XML_READER_H_
