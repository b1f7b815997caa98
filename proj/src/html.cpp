#include "citescope/html.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdlib>

#include "citescope/text.hpp"

namespace citescope::html {

namespace {

struct NamedEntity {
  std::string_view name;
  char32_t cp;
};

constexpr std::array<NamedEntity, 24> kEntities{{
    {"amp", '&'},      {"lt", '<'},        {"gt", '>'},       {"quot", '"'},
    {"apos", '\''},    {"nbsp", 0xA0},     {"hellip", 0x2026}, {"ndash", 0x2013},
    {"mdash", 0x2014}, {"laquo", 0xAB},    {"raquo", 0xBB},   {"lsquo", 0x2018},
    {"rsquo", 0x2019}, {"ldquo", 0x201C},  {"rdquo", 0x201D}, {"middot", 0xB7},
    {"copy", 0xA9},    {"reg", 0xAE},      {"eacute", 0xE9},  {"uuml", 0xFC},
    {"ouml", 0xF6},    {"auml", 0xE4},     {"ccedil", 0xE7},  {"thinsp", 0x2009},
}};

constexpr std::array<std::string_view, 14> kVoidTags{
    "area", "base", "br", "col", "embed", "hr", "img", "input",
    "link", "meta", "param", "source", "track", "wbr"};

constexpr std::array<std::string_view, 6> kSelfClosingSiblings{"tr", "td", "th", "li", "p", "option"};

bool is_void(std::string_view tag) {
  return std::find(kVoidTags.begin(), kVoidTags.end(), tag) != kVoidTags.end();
}

bool is_name_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' ||
         c == '_' || c == ':';
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f'; }

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  std::unique_ptr<Node> run() {
    auto root = Node::make_element("#document");
    stack_.push_back(root.get());
    while (pos_ < src_.size()) {
      if (src_[pos_] == '<') {
        if (src_.compare(pos_, 4, "<!--") == 0) {
          skip_past("-->", pos_ + 4);
        } else if (pos_ + 1 < src_.size() && (src_[pos_ + 1] == '!' || src_[pos_ + 1] == '?')) {
          skip_past(">", pos_ + 2);
        } else if (pos_ + 1 < src_.size() && src_[pos_ + 1] == '/') {
          parse_end_tag();
        } else if (pos_ + 1 < src_.size() && std::isalpha(static_cast<unsigned char>(src_[pos_ + 1]))) {
          parse_start_tag();
        } else {
          emit_text(src_.substr(pos_, 1));
          ++pos_;
        }
      } else {
        auto next = src_.find('<', pos_);
        if (next == std::string_view::npos) next = src_.size();
        emit_text(src_.substr(pos_, next - pos_));
        pos_ = next;
      }
    }
    return root;
  }

 private:
  void skip_past(std::string_view marker, std::size_t from) {
    const auto end = src_.find(marker, from);
    pos_ = end == std::string_view::npos ? src_.size() : end + marker.size();
  }

  void emit_text(std::string_view raw) {
    if (raw.empty()) return;
    stack_.back()->append(Node::make_text(decode_entities(raw)));
  }

  std::string read_name() {
    const auto start = pos_;
    while (pos_ < src_.size() && is_name_char(src_[pos_])) ++pos_;
    return text::to_lower(src_.substr(start, pos_ - start));
  }

  void skip_spaces() {
    while (pos_ < src_.size() && is_space(src_[pos_])) ++pos_;
  }

  void parse_start_tag() {
    ++pos_;  // '<'
    auto tag = read_name();
    auto el = Node::make_element(tag);
    bool self_closed = false;
    while (pos_ < src_.size()) {
      skip_spaces();
      if (pos_ >= src_.size()) break;
      if (src_[pos_] == '>') {
        ++pos_;
        break;
      }
      if (src_[pos_] == '/') {
        self_closed = true;
        ++pos_;
        continue;
      }
      const auto name_start = pos_;
      while (pos_ < src_.size() && !is_space(src_[pos_]) && src_[pos_] != '=' && src_[pos_] != '>' &&
             src_[pos_] != '/')
        ++pos_;
      auto name = text::to_lower(src_.substr(name_start, pos_ - name_start));
      if (name.empty()) {
        ++pos_;
        continue;
      }
      skip_spaces();
      std::string value;
      if (pos_ < src_.size() && src_[pos_] == '=') {
        ++pos_;
        skip_spaces();
        if (pos_ < src_.size() && (src_[pos_] == '"' || src_[pos_] == '\'')) {
          const char q = src_[pos_++];
          auto end = src_.find(q, pos_);
          if (end == std::string_view::npos) end = src_.size();
          value = decode_entities(src_.substr(pos_, end - pos_));
          pos_ = std::min(end + 1, src_.size());
        } else {
          const auto vstart = pos_;
          while (pos_ < src_.size() && !is_space(src_[pos_]) && src_[pos_] != '>') ++pos_;
          value = decode_entities(src_.substr(vstart, pos_ - vstart));
        }
      }
      el->set_attr(std::move(name), std::move(value));
    }

    if (std::find(kSelfClosingSiblings.begin(), kSelfClosingSiblings.end(), tag) !=
            kSelfClosingSiblings.end() &&
        stack_.size() > 1 && stack_.back()->tag() == tag) {
      stack_.pop_back();
    }
    Node* node = stack_.back()->append(std::move(el));
    if (self_closed || is_void(tag)) return;

    if (tag == "script" || tag == "style" || tag == "textarea" || tag == "title") {
      const std::string closing = "</" + tag;
      std::size_t end = pos_;
      while (true) {
        end = src_.find("</", end);
        if (end == std::string_view::npos) break;
        if (text::to_lower(src_.substr(end, closing.size())) == closing) break;
        end += 2;
      }
      if (end == std::string_view::npos) end = src_.size();
      const auto raw = src_.substr(pos_, end - pos_);
      if (!raw.empty()) {
        node->append(Node::make_text(tag == "script" || tag == "style" ? std::string(raw)
                                                                       : decode_entities(raw)));
      }
      pos_ = end;
      if (pos_ < src_.size()) skip_past(">", pos_);
      return;
    }
    stack_.push_back(node);
  }

  void parse_end_tag() {
    pos_ += 2;
    const auto tag = read_name();
    skip_past(">", pos_);
    for (std::size_t i = stack_.size(); i-- > 1;) {
      if (stack_[i]->tag() == tag) {
        stack_.resize(i);
        return;
      }
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::vector<Node*> stack_;
};

void collect(const Node& n, const std::function<bool(const Node&)>& pred,
             std::vector<const Node*>& out) {
  for (const auto& c : n.children()) {
    if (pred(*c)) out.push_back(c.get());
    collect(*c, pred, out);
  }
}

const Node* first_match(const Node& n, const std::function<bool(const Node&)>& pred) {
  for (const auto& c : n.children()) {
    if (pred(*c)) return c.get();
    if (const auto* hit = first_match(*c, pred)) return hit;
  }
  return nullptr;
}

void gather_text(const Node& n, std::string& out) {
  if (n.kind() == Node::Kind::text) {
    out += n.text();
    return;
  }
  if (n.tag() == "script" || n.tag() == "style") return;
  if (n.tag() == "br") out.push_back(' ');
  for (const auto& c : n.children()) gather_text(*c, out);
}

}  // namespace

std::string decode_entities(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] != '&') {
      out.push_back(s[i++]);
      continue;
    }
    const auto semi = s.find(';', i + 1);
    if (semi == std::string_view::npos || semi - i > 12) {
      out.push_back(s[i++]);
      continue;
    }
    const auto ref = s.substr(i + 1, semi - i - 1);
    bool decoded = false;
    if (!ref.empty() && ref[0] == '#') {
      const bool hex = ref.size() > 1 && (ref[1] == 'x' || ref[1] == 'X');
      const std::string digits(ref.substr(hex ? 2 : 1));
      if (!digits.empty()) {
        char* end = nullptr;
        const auto cp = std::strtoul(digits.c_str(), &end, hex ? 16 : 10);
        if (end && *end == '\0' && cp > 0 && cp <= 0x10FFFF) {
          text::append_utf8(out, static_cast<char32_t>(cp));
          decoded = true;
        }
      }
    } else {
      for (const auto& e : kEntities) {
        if (e.name == ref) {
          text::append_utf8(out, e.cp);
          decoded = true;
          break;
        }
      }
    }
    if (decoded) {
      i = semi + 1;
    } else {
      out.push_back(s[i++]);
    }
  }
  return out;
}

std::string escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&#39;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

const std::string* Node::attr(std::string_view name) const {
  for (const auto& [k, v] : attrs_) {
    if (k == name) return &v;
  }
  return nullptr;
}

bool Node::has_class(std::string_view cls) const {
  const auto* classes = attr("class");
  if (!classes) return false;
  std::string_view rest = *classes;
  while (!rest.empty()) {
    const auto start = rest.find_first_not_of(" \t\n\r\f");
    if (start == std::string_view::npos) break;
    rest = rest.substr(start);
    const auto end = rest.find_first_of(" \t\n\r\f");
    if (rest.substr(0, end) == cls) return true;
    if (end == std::string_view::npos) break;
    rest = rest.substr(end);
  }
  return false;
}

std::string Node::text_content() const {
  std::string out;
  gather_text(*this, out);
  return out;
}

const Node* Node::next_element_sibling() const {
  if (!parent_) return nullptr;
  const auto& sibs = parent_->children_;
  bool seen_self = false;
  for (const auto& s : sibs) {
    if (seen_self && s->is_element()) return s.get();
    if (s.get() == this) seen_self = true;
  }
  return nullptr;
}

std::vector<const Node*> Node::find_all(const std::function<bool(const Node&)>& pred) const {
  std::vector<const Node*> out;
  collect(*this, pred, out);
  return out;
}

const Node* Node::find_first(const std::function<bool(const Node&)>& pred) const {
  return first_match(*this, pred);
}

Node* Node::append(std::unique_ptr<Node> child) {
  child->parent_ = this;
  children_.push_back(std::move(child));
  return children_.back().get();
}

Document Document::parse(std::string_view html) {
  Document doc;
  doc.root_ = Parser(html).run();
  return doc;
}

const Node* Document::by_id(std::string_view id) const {
  return find_first([id](const Node& n) {
    const auto* v = n.attr("id");
    return n.is_element() && v && *v == id;
  });
}

std::function<bool(const Node&)> tag_is(std::string tag) {
  return [tag = std::move(tag)](const Node& n) { return n.is_element() && n.tag() == tag; };
}

std::function<bool(const Node&)> has_class(std::string cls) {
  return [cls = std::move(cls)](const Node& n) { return n.is_element() && n.has_class(cls); };
}

std::function<bool(const Node&)> tag_with_class(std::string tag, std::string cls) {
  return [tag = std::move(tag), cls = std::move(cls)](const Node& n) {
    return n.is_element() && n.tag() == tag && n.has_class(cls);
  };
}

std::function<bool(const Node&)> has_attr(std::string name) {
  return [name = std::move(name)](const Node& n) { return n.is_element() && n.attr(name) != nullptr; };
}

}  // namespace citescope::html
