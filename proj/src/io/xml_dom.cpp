#include "mtn/io/xml_dom.hpp"

#include <expat.h>

#include <memory>

namespace mtn::xml {

const std::string* Element::attribute(std::string_view key) const {
  for (const auto& [k, v] : attributes) {
    if (k == key) return &v;
  }
  return nullptr;
}

const Element* Element::child(std::string_view child_name) const {
  for (const auto& c : children) {
    if (c.name == child_name) return &c;
  }
  return nullptr;
}

std::vector<const Element*> Element::children_named(std::string_view child_name) const {
  std::vector<const Element*> out;
  for (const auto& c : children) {
    if (c.name == child_name) out.push_back(&c);
  }
  return out;
}

std::string Element::child_text(std::string_view child_name) const {
  const Element* c = child(child_name);
  return c ? trim(c->text) : std::string();
}

std::string trim(std::string_view text) {
  const char* ws = " \t\r\n";
  auto begin = text.find_first_not_of(ws);
  if (begin == std::string_view::npos) return {};
  auto end = text.find_last_not_of(ws);
  return std::string(text.substr(begin, end - begin + 1));
}

std::string escape_attribute(std::string_view value) {
  std::string out;
  out.reserve(value.size());
  for (char c : value) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\n': out += "&#10;"; break;
      case '\t': out += "&#9;"; break;
      case '\r': out += "&#13;"; break;
      default: out += c;
    }
  }
  return out;
}

namespace {

struct Builder {
  XML_Parser parser = nullptr;
  std::vector<Element*> stack;
  Element root;
  bool has_root = false;

  static void on_start(void* data, const XML_Char* name, const XML_Char** attrs) {
    auto* self = static_cast<Builder*>(data);
    Element el;
    el.name = name;
    el.line = static_cast<int>(XML_GetCurrentLineNumber(self->parser));
    el.column = static_cast<int>(XML_GetCurrentColumnNumber(self->parser)) + 1;
    for (int i = 0; attrs[i]; i += 2) el.attributes.emplace_back(attrs[i], attrs[i + 1]);
    if (self->stack.empty()) {
      self->root = std::move(el);
      self->has_root = true;
      self->stack.push_back(&self->root);
    } else {
      Element* parent = self->stack.back();
      parent->children.push_back(std::move(el));
      self->stack.push_back(&parent->children.back());
    }
  }

  static void on_end(void* data, const XML_Char*) {
    static_cast<Builder*>(data)->stack.pop_back();
  }

  static void on_text(void* data, const XML_Char* s, int len) {
    auto* self = static_cast<Builder*>(data);
    if (!self->stack.empty()) self->stack.back()->text.append(s, static_cast<std::size_t>(len));
  }
};

}  // namespace

Element parse(std::string_view bytes) {
  std::unique_ptr<std::remove_pointer_t<XML_Parser>, decltype(&XML_ParserFree)> parser(
      XML_ParserCreate("UTF-8"), &XML_ParserFree);
  if (!parser) throw Error("cannot allocate XML parser");
  Builder builder;
  builder.parser = parser.get();
  XML_SetUserData(parser.get(), &builder);
  XML_SetElementHandler(parser.get(), &Builder::on_start, &Builder::on_end);
  XML_SetCharacterDataHandler(parser.get(), &Builder::on_text);
  // children vectors may reallocate; pointers on the stack always refer to
  // the last child of their parent, which is the only element growing.
  if (XML_Parse(parser.get(), bytes.data(), static_cast<int>(bytes.size()), XML_TRUE) ==
      XML_STATUS_ERROR) {
    throw SyntaxError(XML_ErrorString(XML_GetErrorCode(parser.get())),
                      static_cast<int>(XML_GetCurrentLineNumber(parser.get())),
                      static_cast<int>(XML_GetCurrentColumnNumber(parser.get())) + 1);
  }
  if (!builder.has_root) throw SyntaxError("document has no root element", 1, 1);
  return std::move(builder.root);
}

}  // namespace mtn::xml
