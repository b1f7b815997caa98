#pragma once

#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace citescope::html {

/// Decodes named (common subset) and numeric character references.
/// "&nbsp;" becomes U+00A0, not a plain space.
std::string decode_entities(std::string_view s);

/// Escapes &, <, >, " and ' for text or attribute context.
std::string escape(std::string_view s);

class Node {
 public:
  enum class Kind { element, text };

  static std::unique_ptr<Node> make_element(std::string tag) {
    auto n = std::unique_ptr<Node>(new Node(Kind::element));
    n->tag_ = std::move(tag);
    return n;
  }
  static std::unique_ptr<Node> make_text(std::string text) {
    auto n = std::unique_ptr<Node>(new Node(Kind::text));
    n->text_ = std::move(text);
    return n;
  }

  Kind kind() const { return kind_; }
  bool is_element() const { return kind_ == Kind::element; }
  const std::string& tag() const { return tag_; }
  const std::string& text() const { return text_; }
  const Node* parent() const { return parent_; }
  const std::vector<std::unique_ptr<Node>>& children() const { return children_; }

  const std::string* attr(std::string_view name) const;
  bool has_class(std::string_view cls) const;

  /// Concatenated descendant text, entities already decoded.
  std::string text_content() const;

  const Node* next_element_sibling() const;

  /// Depth-first, document order, excluding `this`.
  std::vector<const Node*> find_all(const std::function<bool(const Node&)>& pred) const;
  const Node* find_first(const std::function<bool(const Node&)>& pred) const;

  Node* append(std::unique_ptr<Node> child);
  void set_attr(std::string name, std::string value) {
    attrs_.emplace_back(std::move(name), std::move(value));
  }

 private:
  explicit Node(Kind k) : kind_(k) {}

  Kind kind_;
  std::string tag_;
  std::string text_;
  std::vector<std::pair<std::string, std::string>> attrs_;
  std::vector<std::unique_ptr<Node>> children_;
  Node* parent_ = nullptr;
};

/// Lenient HTML parser: unknown end tags are ignored, unclosed elements are
/// closed by an ancestor's end tag or end of input, <script>/<style> content
/// is kept raw.
class Document {
 public:
  static Document parse(std::string_view html);

  const Node& root() const { return *root_; }

  std::vector<const Node*> find_all(const std::function<bool(const Node&)>& pred) const {
    return root_->find_all(pred);
  }
  const Node* find_first(const std::function<bool(const Node&)>& pred) const {
    return root_->find_first(pred);
  }
  const Node* by_id(std::string_view id) const;

 private:
  std::unique_ptr<Node> root_;
};

// Predicate builders.
std::function<bool(const Node&)> tag_is(std::string tag);
std::function<bool(const Node&)> has_class(std::string cls);
std::function<bool(const Node&)> tag_with_class(std::string tag, std::string cls);
std::function<bool(const Node&)> has_attr(std::string name);

}  // namespace citescope::html
