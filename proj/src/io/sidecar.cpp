#include "mtn/io/sidecar.hpp"

#include <set>

#include <json.hpp>

#include "mtn/vocabulary.hpp"

namespace mtn {

namespace {

using nlohmann::json;

std::set<std::string> work_ids(const Work& work) {
  std::set<std::string> ids;
  for (const auto& part : work.parts) {
    for (const auto& m : part.measures) {
      ids.insert(m.id);
      for (const auto& n : m.children) {
        for_each_node(n, [&](const Node& sub) {
          if (!sub.id.empty()) ids.insert(sub.id);
        });
      }
      for_each_token(m, [&](const Token& t) { ids.insert(t.id); });
    }
  }
  return ids;
}

[[noreturn]] void malformed(const std::string& subject, const std::string& message) {
  throw SidecarError(SidecarErrorKind::Malformed, subject, subject + ": " + message);
}

void only_keys(const json& obj, std::initializer_list<std::string_view> keys,
               const std::string& subject) {
  for (const auto& [k, _] : obj.items()) {
    bool known = false;
    for (auto key : keys) known = known || key == k;
    if (!known) malformed(subject, "unknown field '" + k + "'");
  }
}

Box read_box(const json& j, const std::string& subject) {
  if (!j.is_object()) malformed(subject, "box must be an object");
  only_keys(j, {"x", "y", "width", "height"}, subject);
  Box b;
  auto field = [&](const char* key) -> std::int64_t {
    auto it = j.find(key);
    if (it == j.end() || !it->is_number_integer()) {
      malformed(subject, std::string("box.") + key + " must be an integer");
    }
    auto v = it->get<std::int64_t>();
    if (v < 0) {
      throw SidecarError(SidecarErrorKind::NegativeExtent, subject,
                         subject + ": box." + key + " is negative");
    }
    return v;
  };
  b.x = field("x");
  b.y = field("y");
  b.width = field("width");
  b.height = field("height");
  return b;
}

json write_box(const Box& b) {
  return json{{"height", b.height}, {"width", b.width}, {"x", b.x}, {"y", b.y}};
}

bool is_dynamic_text(const std::string& text) {
  return Vocabulary::standard().contains("dyn_" + text);
}

}  // namespace

AnnotationSidecar read_sidecar(std::string_view bytes, const Work& work) {
  json doc;
  try {
    doc = json::parse(bytes);
  } catch (const json::parse_error& e) {
    throw SidecarError(SidecarErrorKind::Malformed, "", e.what());
  }
  if (!doc.is_object()) malformed("<root>", "sidecar must be a JSON object");
  const auto ids = work_ids(work);
  AnnotationSidecar out;
  for (const auto& [id, rec] : doc.items()) {
    if (!ids.contains(id)) {
      throw SidecarError(SidecarErrorKind::DanglingId, id, "'" + id + "' is not an id of the work");
    }
    if (!rec.is_object()) malformed(id, "record must be an object");
    only_keys(rec, {"box", "text", "ext"}, id);
    Annotation a;
    if (auto it = rec.find("box"); it != rec.end()) a.box = read_box(*it, id);
    if (auto it = rec.find("text"); it != rec.end()) {
      if (!it->is_array()) malformed(id, "text must be an array");
      for (const auto& entry : *it) {
        if (!entry.is_object()) malformed(id, "text entry must be an object");
        only_keys(entry, {"box", "text"}, id);
        if (!entry.contains("box") || !entry.contains("text") || !entry["text"].is_string()) {
          malformed(id, "text entry needs box and text");
        }
        TextBox tb{read_box(entry["box"], id), entry["text"].get<std::string>()};
        if (is_dynamic_text(tb.text)) {
          throw SidecarError(SidecarErrorKind::DynamicText, id,
                             id + ": dynamic '" + tb.text + "' belongs in the score as a token");
        }
        a.texts.push_back(std::move(tb));
      }
    }
    if (auto it = rec.find("ext"); it != rec.end()) {
      if (!it->is_object()) malformed(id, "ext must be an object");
      for (const auto& [k, v] : it->items()) {
        if (!v.is_string()) malformed(id, "ext values must be strings");
        a.extensions[k] = v.get<std::string>();
      }
    }
    out.records[id] = std::move(a);
  }
  return out;
}

std::string write_sidecar(const AnnotationSidecar& sidecar) {
  json doc = json::object();
  for (const auto& [id, a] : sidecar.records) {
    json rec = json::object();
    if (a.box) rec["box"] = write_box(*a.box);
    if (!a.texts.empty()) {
      json texts = json::array();
      for (const auto& tb : a.texts) texts.push_back(json{{"box", write_box(tb.box)}, {"text", tb.text}});
      rec["text"] = std::move(texts);
    }
    if (!a.extensions.empty()) rec["ext"] = a.extensions;
    doc[id] = std::move(rec);
  }
  return doc.dump(2) + "\n";
}

}  // namespace mtn
