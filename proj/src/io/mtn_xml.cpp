#include "mtn/io/mtn_xml.hpp"

#include <charconv>
#include <set>

#include "mtn/canonical.hpp"
#include "mtn/io/xml_dom.hpp"

namespace mtn {

std::string_view parse_error_kind_name(ParseErrorKind kind) {
  switch (kind) {
    case ParseErrorKind::MalformedXml: return "malformed-xml";
    case ParseErrorKind::UnknownElement: return "unknown-element";
    case ParseErrorKind::UnknownAttribute: return "unknown-attribute";
    case ParseErrorKind::MissingAttribute: return "missing-attribute";
    case ParseErrorKind::BadFraction: return "bad-fraction";
    case ParseErrorKind::BadValue: return "bad-value";
    case ParseErrorKind::DuplicateId: return "duplicate-id";
    case ParseErrorKind::Validation: return "validation";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// writer

namespace {

class Writer {
 public:
  explicit Writer(std::string& out) : out_(out) {}

  void open(std::string_view name, const std::vector<std::pair<std::string_view, std::string>>& attrs,
            bool empty) {
    indent();
    out_ += '<';
    out_ += name;
    for (const auto& [k, v] : attrs) {
      out_ += ' ';
      out_ += k;
      out_ += "=\"";
      out_ += xml::escape_attribute(v);
      out_ += '"';
    }
    out_ += empty ? "/>\n" : ">\n";
    if (!empty) ++depth_;
  }

  void close(std::string_view name) {
    --depth_;
    indent();
    out_ += "</";
    out_ += name;
    out_ += ">\n";
  }

  void token(const Token& t) {
    std::vector<std::pair<std::string_view, std::string>> attrs;
    attrs.emplace_back("id", t.id);
    attrs.emplace_back("label", t.label);
    if (t.orphan) attrs.emplace_back("orphan", "true");
    if (t.pair_id) attrs.emplace_back("pair", *t.pair_id);
    attrs.emplace_back("staff", std::to_string(t.position.staff));
    if (t.position.step) attrs.emplace_back("step", std::to_string(*t.position.step));
    if (t.numeric_value) attrs.emplace_back("value", std::to_string(*t.numeric_value));
    open("token", attrs, true);
  }

  void node(const Node& n) {
    std::vector<std::pair<std::string_view, std::string>> attrs;
    if (!n.id.empty()) attrs.emplace_back("id", n.id);
    if (n.onset) attrs.emplace_back("onset", to_string(*n.onset));
    if (n.staff) attrs.emplace_back("staff", std::to_string(*n.staff));
    if (n.synthetic) attrs.emplace_back("synthetic", "true");
    const auto name = kind_name(n.kind);
    open(name, attrs, n.children.empty());
    if (n.children.empty()) return;
    for (const auto& c : n.children) {
      if (const auto* t = std::get_if<Token>(&c)) {
        token(*t);
      } else {
        node(std::get<Node>(c));
      }
    }
    close(name);
  }

 private:
  void indent() { out_.append(static_cast<std::size_t>(depth_) * 2, ' '); }

  std::string& out_;
  int depth_ = 0;
};

}  // namespace

std::string serialize_work(const Work& work, const Vocabulary& vocab) {
  auto violations = validate(work, vocab);
  if (!violations.empty()) throw InvalidWorkError(violations.front());

  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  Writer w(out);
  w.open("work", {{"id", work.work_id}, {"mtn-version", std::string(kFormatVersion)}},
         work.parts.empty());
  for (const auto& part : work.parts) {
    w.open("part", {{"id", part.id}, {"staves", std::to_string(part.staff_count)}},
           part.measures.empty());
    for (const auto& m : part.measures) {
      std::vector<std::pair<std::string_view, std::string>> attrs{{"id", m.id}};
      if (m.line_start) attrs.emplace_back("line-start", "true");
      w.open("measure", attrs, m.children.empty());
      if (m.children.empty()) continue;
      for (const auto& n : m.children) w.node(n);
      w.close("measure");
    }
    if (!part.measures.empty()) w.close("part");
  }
  if (!work.parts.empty()) w.close("work");
  return out;
}

// ---------------------------------------------------------------------------
// reader

namespace {

class Reader {
 public:
  explicit Reader(const Vocabulary& vocab) : vocab_(vocab) {}

  ParsedWork run(std::string_view bytes) {
    xml::Element root;
    try {
      root = xml::parse(bytes);
    } catch (const xml::SyntaxError& e) {
      throw ParseError(ParseErrorKind::MalformedXml, e.line(), e.column(), e.what());
    }
    ParsedWork result;
    if (root.name != "work") fail(ParseErrorKind::UnknownElement, root, "root must be <work>");
    allow_attributes(root, {"id", "mtn-version"});
    no_text(root);
    result.work.work_id = required(root, "id");
    const std::string version = required(root, "mtn-version");
    if (version != kFormatVersion) {
      fail(ParseErrorKind::BadValue, root, "unsupported mtn-version '" + version + "'");
    }
    for (const auto& part_el : root.children) {
      if (part_el.name != "part") fail(ParseErrorKind::UnknownElement, part_el, "expected <part>");
      allow_attributes(part_el, {"id", "staves"});
      no_text(part_el);
      Part part;
      part.id = required(part_el, "id");
      part.staff_count = integer(part_el, required(part_el, "staves"), "staves");
      for (const auto& m_el : part_el.children) {
        part.measures.push_back(measure(m_el, result.reordered));
      }
      result.work.parts.push_back(std::move(part));
    }
    result.violations = validate(result.work, vocab_);
    return result;
  }

 private:
  [[noreturn]] static void fail(ParseErrorKind kind, const xml::Element& el,
                                const std::string& message) {
    throw ParseError(kind, el.line, el.column, message);
  }

  static void allow_attributes(const xml::Element& el, std::initializer_list<std::string_view> keys) {
    for (const auto& [k, v] : el.attributes) {
      bool known = false;
      for (auto key : keys) known = known || key == k;
      if (!known) {
        fail(ParseErrorKind::UnknownAttribute, el, "attribute '" + k + "' on <" + el.name + ">");
      }
    }
  }

  static void no_text(const xml::Element& el) {
    if (!xml::trim(el.text).empty()) {
      fail(ParseErrorKind::BadValue, el, "unexpected text inside <" + el.name + ">");
    }
  }

  static std::string required(const xml::Element& el, std::string_view key) {
    const std::string* v = el.attribute(key);
    if (!v) {
      fail(ParseErrorKind::MissingAttribute, el,
           "<" + el.name + "> needs attribute '" + std::string(key) + "'");
    }
    return *v;
  }

  static int integer(const xml::Element& el, const std::string& text, std::string_view key) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
      fail(ParseErrorKind::BadValue, el,
           "attribute '" + std::string(key) + "' is not an integer: '" + text + "'");
    }
    return value;
  }

  static bool boolean(const xml::Element& el, const std::string* text, std::string_view key) {
    if (!text) return false;
    if (*text == "true") return true;
    if (*text == "false") return false;
    fail(ParseErrorKind::BadValue, el,
         "attribute '" + std::string(key) + "' must be true or false");
  }

  void claim_id(const xml::Element& el, const std::string& id, std::set<std::string>& ids) {
    if (id.empty()) fail(ParseErrorKind::BadValue, el, "empty id");
    if (!ids.insert(id).second) fail(ParseErrorKind::DuplicateId, el, "duplicate id '" + id + "'");
  }

  Measure measure(const xml::Element& el, bool& reordered) {
    if (el.name != "measure") fail(ParseErrorKind::UnknownElement, el, "expected <measure>");
    allow_attributes(el, {"id", "line-start"});
    no_text(el);
    Measure m;
    m.id = required(el, "id");
    claim_id(el, m.id, measure_ids_);
    m.line_start = boolean(el, el.attribute("line-start"), "line-start");
    for (const auto& child : el.children) {
      if (child.name == "token") {
        fail(ParseErrorKind::UnknownElement, child, "tokens must sit inside a node");
      }
      m.children.push_back(node(child));
    }
    try {
      if (!is_canonical(m, vocab_)) {
        m = canonicalize(std::move(m), vocab_);
        reordered = true;
      }
    } catch (const ValidationError& e) {
      fail(ParseErrorKind::Validation, el, e.what());
    }
    return m;
  }

  Node node(const xml::Element& el) {
    auto kind = kind_from_name(el.name);
    if (!kind) fail(ParseErrorKind::UnknownElement, el, "unknown element <" + el.name + ">");
    allow_attributes(el, {"id", "onset", "staff", "synthetic"});
    no_text(el);
    Node n;
    n.kind = *kind;
    if (const auto* id = el.attribute("id")) {
      n.id = *id;
      claim_id(el, n.id, element_ids_);
    }
    if (const auto* onset = el.attribute("onset")) {
      RationalTime t;
      if (!parse_rational(*onset, t)) {
        fail(ParseErrorKind::BadFraction, el, "onset '" + *onset + "' is not a fraction");
      }
      if (to_string(t) != *onset && to_string(t, true) != *onset) {
        fail(ParseErrorKind::BadFraction, el, "onset '" + *onset + "' is not in lowest terms");
      }
      n.onset = t;
    }
    if (const auto* staff = el.attribute("staff")) n.staff = integer(el, *staff, "staff");
    n.synthetic = boolean(el, el.attribute("synthetic"), "synthetic");
    for (const auto& child : el.children) {
      if (child.name == "token") {
        n.children.emplace_back(token(child));
      } else {
        n.children.emplace_back(node(child));
      }
    }
    return n;
  }

  Token token(const xml::Element& el) {
    allow_attributes(el, {"id", "label", "orphan", "pair", "staff", "step", "value"});
    no_text(el);
    if (!el.children.empty()) {
      fail(ParseErrorKind::UnknownElement, el.children.front(), "tokens cannot have children");
    }
    Token t;
    t.id = required(el, "id");
    claim_id(el, t.id, element_ids_);
    t.label = required(el, "label");
    t.position.staff = integer(el, required(el, "staff"), "staff");
    if (const auto* step = el.attribute("step")) t.position.step = integer(el, *step, "step");
    if (const auto* pair = el.attribute("pair")) t.pair_id = *pair;
    if (const auto* value = el.attribute("value")) t.numeric_value = integer(el, *value, "value");
    t.orphan = boolean(el, el.attribute("orphan"), "orphan");
    return t;
  }

  const Vocabulary& vocab_;
  std::set<std::string> element_ids_;
  std::set<std::string> measure_ids_;
};

}  // namespace

ParsedWork parse_work(std::string_view bytes, const Vocabulary& vocab) {
  return Reader(vocab).run(bytes);
}

}  // namespace mtn
