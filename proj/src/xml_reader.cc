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

#include "urdfplus/xml_reader.h"

#include <algorithm>
#include <cctype>
#include <cstdint>

namespace urdfplus::xml {
namespace {

constexpr int kMaxDepth = 256;

bool IsSpace(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

bool IsNameStart(char c) {
  const auto u = static_cast<unsigned char>(c);
  return std::isalpha(u) || c == '_' || c == ':' || u >= 0x80;
}

bool IsNameChar(char c) {
  const auto u = static_cast<unsigned char>(c);
  return IsNameStart(c) || std::isdigit(u) || c == '-' || c == '.';
}

void AppendUtf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {
    line_starts_.push_back(0);
    for (std::size_t i = 0; i < text_.size(); ++i) {
      if (text_[i] == '\n') line_starts_.push_back(i + 1);
    }
  }

  Element Document() {
    if (text_.substr(0, 3) == "\xEF\xBB\xBF") pos_ = 3;
    const std::size_t content_start = pos_;
    bool seen_decl = false;
    while (true) {
      SkipSpace();
      if (StartsWith("<?")) {
        const bool is_decl = StartsWith("<?xml") && pos_ + 5 < text_.size() &&
                             IsSpace(text_[pos_ + 5]);
        if (is_decl) {
          if (seen_decl || pos_ != content_start) {
            Fail("XML declaration must appear at the start of the document");
          }
          seen_decl = true;
          Declaration();
        } else {
          ProcessingInstruction();
        }
      } else if (StartsWith("<!--")) {
        Comment();
      } else if (StartsWith("<!DOCTYPE")) {
        Doctype();
      } else {
        break;
      }
    }
    if (AtEnd()) Fail("document has no root element");
    if (Peek() != '<') Fail("unexpected text before the root element");
    Element root = ParseElement(0);
    while (true) {
      SkipSpace();
      if (AtEnd()) break;
      if (StartsWith("<!--")) {
        Comment();
      } else if (StartsWith("<?")) {
        ProcessingInstruction();
      } else {
        Fail("unexpected content after the root element");
      }
    }
    return root;
  }

 private:
  SourceLocation LocationAt(std::size_t offset) const {
    auto it = std::upper_bound(line_starts_.begin(), line_starts_.end(), offset);
    const std::size_t line = static_cast<std::size_t>(it - line_starts_.begin());
    return {static_cast<int>(line),
            static_cast<int>(offset - line_starts_[line - 1] + 1)};
  }

  [[noreturn]] void Fail(const std::string& message) const { FailAt(pos_, message); }
  [[noreturn]] void FailAt(std::size_t offset, const std::string& message) const {
    throw SyntaxError(message, LocationAt(std::min(offset, text_.size())));
  }

  bool AtEnd() const { return pos_ >= text_.size(); }
  char Peek() const { return AtEnd() ? '\0' : text_[pos_]; }
  bool StartsWith(std::string_view s) const { return text_.substr(pos_, s.size()) == s; }

  void Expect(std::string_view s) {
    if (!StartsWith(s)) Fail("expected '" + std::string(s) + "'");
    pos_ += s.size();
  }

  void SkipSpace() {
    while (!AtEnd() && IsSpace(text_[pos_])) ++pos_;
  }

  std::size_t SkipPast(std::string_view terminator, const char* what) {
    const std::size_t start = pos_;
    const std::size_t found = text_.find(terminator, pos_);
    if (found == std::string_view::npos) {
      FailAt(start, std::string("unterminated ") + what);
    }
    pos_ = found + terminator.size();
    return found;
  }

  void Comment() {
    pos_ += 4;
    SkipPast("-->", "comment");
  }

  void ProcessingInstruction() {
    pos_ += 2;
    SkipPast("?>", "processing instruction");
  }

  void Declaration() {
    const std::size_t start = pos_;
    pos_ += 5;
    const std::size_t end = SkipPast("?>", "XML declaration");
    const std::string_view body = text_.substr(start, end - start);
    const std::size_t enc = body.find("encoding");
    if (enc == std::string_view::npos) return;
    std::size_t q = body.find_first_of("\"'", enc);
    if (q == std::string_view::npos) FailAt(start + enc, "malformed encoding declaration");
    const std::size_t close = body.find(body[q], q + 1);
    if (close == std::string_view::npos) FailAt(start + enc, "malformed encoding declaration");
    std::string value(body.substr(q + 1, close - q - 1));
    std::transform(value.begin(), value.end(), value.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (value != "utf-8" && value != "utf8") {
      FailAt(start + enc, "unsupported encoding '" + value + "'; only UTF-8 is accepted");
    }
  }

  void Doctype() {
    const std::size_t start = pos_;
    int depth = 0;
    while (!AtEnd()) {
      const char c = text_[pos_++];
      if (c == '[') ++depth;
      if (c == ']') --depth;
      if (c == '>' && depth <= 0) return;
    }
    FailAt(start, "unterminated DOCTYPE");
  }

  std::string Name() {
    if (AtEnd() || !IsNameStart(Peek())) Fail("expected a name");
    const std::size_t start = pos_;
    while (!AtEnd() && IsNameChar(Peek())) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  void DecodeEntity(std::string& out) {
    const std::size_t start = pos_;
    const std::size_t semi = text_.find(';', pos_);
    if (semi == std::string_view::npos || semi - pos_ > 12) {
      FailAt(start, "malformed entity reference");
    }
    const std::string_view ref = text_.substr(pos_ + 1, semi - pos_ - 1);
    pos_ = semi + 1;
    if (ref == "lt") { out += '<'; return; }
    if (ref == "gt") { out += '>'; return; }
    if (ref == "amp") { out += '&'; return; }
    if (ref == "quot") { out += '"'; return; }
    if (ref == "apos") { out += '\''; return; }
    if (!ref.empty() && ref[0] == '#') {
      std::uint32_t cp = 0;
      const bool hex = ref.size() > 1 && (ref[1] == 'x' || ref[1] == 'X');
      const std::string_view digits = ref.substr(hex ? 2 : 1);
      if (digits.empty()) FailAt(start, "malformed character reference");
      for (char c : digits) {
        int d;
        if (c >= '0' && c <= '9') d = c - '0';
        else if (hex && c >= 'a' && c <= 'f') d = c - 'a' + 10;
        else if (hex && c >= 'A' && c <= 'F') d = c - 'A' + 10;
        else FailAt(start, "malformed character reference");
        cp = cp * (hex ? 16 : 10) + static_cast<std::uint32_t>(d);
        if (cp > 0x10FFFF) FailAt(start, "character reference out of range");
      }
      AppendUtf8(out, cp);
      return;
    }
    FailAt(start, "unknown entity '&" + std::string(ref) + ";'");
  }

  std::string AttributeValue() {
    const char quote = Peek();
    if (quote != '"' && quote != '\'') Fail("expected a quoted attribute value");
    const std::size_t start = pos_++;
    std::string value;
    while (true) {
      if (AtEnd()) FailAt(start, "unterminated attribute value");
      const char c = text_[pos_];
      if (c == quote) { ++pos_; break; }
      if (c == '<') Fail("'<' is not allowed in attribute values");
      if (c == '&') { DecodeEntity(value); continue; }
      value += c;
      ++pos_;
    }
    return value;
  }

  Element ParseElement(int depth) {
    if (depth > kMaxDepth) Fail("elements nested too deeply");
    Element element;
    element.begin = pos_;
    element.location = LocationAt(pos_);
    Expect("<");
    element.name = Name();
    while (true) {
      const bool had_space = !AtEnd() && IsSpace(Peek());
      SkipSpace();
      if (StartsWith("/>")) {
        pos_ += 2;
        element.end = pos_;
        return element;
      }
      if (StartsWith(">")) {
        ++pos_;
        break;
      }
      if (AtEnd()) FailAt(element.begin, "unterminated start tag <" + element.name + ">");
      if (!had_space) Fail("expected whitespace between attributes");
      Attribute attr;
      attr.location = LocationAt(pos_);
      attr.name = Name();
      SkipSpace();
      Expect("=");
      SkipSpace();
      attr.value = AttributeValue();
      if (element.FindAttribute(attr.name)) {
        throw SyntaxError("duplicate attribute '" + attr.name + "'", attr.location);
      }
      element.attributes.push_back(std::move(attr));
    }
    while (true) {
      if (AtEnd()) {
        FailAt(element.begin, "element <" + element.name + "> is never closed");
      }
      if (StartsWith("</")) {
        const std::size_t close_at = pos_;
        pos_ += 2;
        const std::string name = Name();
        if (name != element.name) {
          FailAt(close_at, "mismatched closing tag </" + name + ">, expected </" +
                               element.name + ">");
        }
        SkipSpace();
        Expect(">");
        element.end = pos_;
        return element;
      }
      if (StartsWith("<!--")) {
        Comment();
      } else if (StartsWith("<![CDATA[")) {
        pos_ += 9;
        const std::size_t start = pos_;
        const std::size_t end = SkipPast("]]>", "CDATA section");
        element.text.append(text_.substr(start, end - start));
      } else if (StartsWith("<?")) {
        ProcessingInstruction();
      } else if (StartsWith("<!")) {
        Fail("unexpected markup declaration inside an element");
      } else if (Peek() == '<') {
        element.children.push_back(ParseElement(depth + 1));
      } else if (Peek() == '&') {
        DecodeEntity(element.text);
      } else {
        element.text += text_[pos_++];
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::vector<std::size_t> line_starts_;
};

}  // namespace

const Attribute* Element::FindAttribute(std::string_view attr) const {
  for (const Attribute& a : attributes) {
    if (a.name == attr) return &a;
  }
  return nullptr;
}

Element Parse(std::string_view text) { return Reader(text).Document(); }

}  // namespace urdfplus::xml
