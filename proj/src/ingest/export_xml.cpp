#include "ingest/export_xml.hpp"

#include <cctype>
#include <charconv>
#include <map>

namespace aft::ingest {

namespace {

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xc0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xe0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
  } else {
    out.push_back(static_cast<char>(0xf0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3f)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
  }
}

std::string decode_entities(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (c != '&') {
      out.push_back(c);
      ++i;
      continue;
    }
    auto semi = s.find(';', i);
    if (semi == std::string_view::npos || semi - i > 10) {
      out.push_back(c);
      ++i;
      continue;
    }
    std::string_view name = s.substr(i + 1, semi - i - 1);
    if (name == "lt") {
      out.push_back('<');
    } else if (name == "gt") {
      out.push_back('>');
    } else if (name == "amp") {
      out.push_back('&');
    } else if (name == "quot") {
      out.push_back('"');
    } else if (name == "apos") {
      out.push_back('\'');
    } else if (!name.empty() && name[0] == '#') {
      std::uint32_t cp = 0;
      bool ok = false;
      if (name.size() > 1 && (name[1] == 'x' || name[1] == 'X')) {
        auto r = std::from_chars(name.data() + 2, name.data() + name.size(), cp, 16);
        ok = r.ec == std::errc() && r.ptr == name.data() + name.size();
      } else {
        auto r = std::from_chars(name.data() + 1, name.data() + name.size(), cp, 10);
        ok = r.ec == std::errc() && r.ptr == name.data() + name.size();
      }
      if (ok && cp <= 0x10ffff) {
        append_utf8(out, cp);
      } else {
        out.append(s.substr(i, semi - i + 1));
      }
    } else {
      out.append(s.substr(i, semi - i + 1));
    }
    i = semi + 1;
  }
  return out;
}

struct ItemError {
  std::string reason;
};

class Scanner {
public:
  explicit Scanner(std::string_view src) : src_(src) {}

  std::size_t pos() const { return pos_; }
  bool eof() const { return pos_ >= src_.size(); }

  void skip_ws() {
    while (pos_ < src_.size() &&
           std::isspace(static_cast<unsigned char>(src_[pos_])))
      ++pos_;
  }

  // Skips <?...?>, <!--...-->, <!DOCTYPE...> (with nested brackets).
  void skip_misc() {
    for (;;) {
      skip_ws();
      if (!starts_with("<")) return;
      if (starts_with("<?")) {
        auto end = src_.find("?>", pos_);
        pos_ = end == std::string_view::npos ? src_.size() : end + 2;
      } else if (starts_with("<!--")) {
        auto end = src_.find("-->", pos_ + 4);
        pos_ = end == std::string_view::npos ? src_.size() : end + 3;
      } else if (starts_with("<!")) {
        int depth = 0;
        while (pos_ < src_.size()) {
          char c = src_[pos_++];
          if (c == '[') ++depth;
          if (c == ']') --depth;
          if (c == '>' && depth <= 0) break;
        }
      } else {
        return;
      }
    }
  }

  bool starts_with(std::string_view p) const {
    return src_.compare(pos_, p.size(), p) == 0;
  }

  // At '<' of a start tag: reads the name and raw attribute text, leaves
  // position after '>'. Self-closing tags report empty=true.
  bool read_start_tag(std::string& name, std::string& attr_text, bool& empty) {
    if (!starts_with("<") || starts_with("</")) return false;
    std::size_t p = pos_ + 1;
    std::size_t name_start = p;
    while (p < src_.size() && !std::isspace(static_cast<unsigned char>(src_[p])) &&
           src_[p] != '>' && src_[p] != '/')
      ++p;
    if (p == name_start) return false;
    name.assign(src_.substr(name_start, p - name_start));
    std::size_t attr_start = p;
    bool in_quote = false;
    char quote = 0;
    while (p < src_.size()) {
      char c = src_[p];
      if (in_quote) {
        if (c == quote) in_quote = false;
      } else if (c == '"' || c == '\'') {
        in_quote = true;
        quote = c;
      } else if (c == '>') {
        break;
      }
      ++p;
    }
    if (p >= src_.size()) return false;
    std::string_view attrs = src_.substr(attr_start, p - attr_start);
    empty = !attrs.empty() && attrs.back() == '/';
    if (empty) attrs.remove_suffix(1);
    attr_text.assign(attrs);
    pos_ = p + 1;
    return true;
  }

  // Collects text and CDATA up to </name>; nested elements contribute their
  // text content too (tolerant of stray markup in payloads).
  bool read_content_until_close(const std::string& name, std::string& text_out) {
    std::string close = "</" + name;
    while (pos_ < src_.size()) {
      if (src_[pos_] == '<') {
        if (starts_with("<![CDATA[")) {
          auto end = src_.find("]]>", pos_ + 9);
          if (end == std::string_view::npos) return false;
          text_out.append(src_.substr(pos_ + 9, end - pos_ - 9));
          pos_ = end + 3;
        } else if (starts_with("<!--")) {
          auto end = src_.find("-->", pos_ + 4);
          if (end == std::string_view::npos) return false;
          pos_ = end + 3;
        } else if (starts_with(close)) {
          std::size_t p = pos_ + close.size();
          while (p < src_.size() && std::isspace(static_cast<unsigned char>(src_[p]))) ++p;
          if (p < src_.size() && src_[p] == '>') {
            pos_ = p + 1;
            return true;
          }
          return false;
        } else if (starts_with("</")) {
          // mismatched close tag inside content
          return false;
        } else {
          std::string child, attrs;
          bool empty = false;
          if (!read_start_tag(child, attrs, empty)) return false;
          if (!empty) {
            if (!read_content_until_close(child, text_out)) return false;
          }
        }
      } else {
        std::size_t start = pos_;
        while (pos_ < src_.size() && src_[pos_] != '<') ++pos_;
        std::string_view chunk = src_.substr(start, pos_ - start);
        text_out += decode_entities(chunk);
      }
    }
    return false;
  }

  void seek(std::size_t p) { pos_ = p; }

  std::size_t find(std::string_view needle, std::size_t from) const {
    return src_.find(needle, from);
  }

private:
  std::string_view src_;
  std::size_t pos_ = 0;
};

std::map<std::string, std::string> parse_attrs(std::string_view attr_text) {
  std::map<std::string, std::string> out;
  std::size_t i = 0;
  while (i < attr_text.size()) {
    while (i < attr_text.size() && std::isspace(static_cast<unsigned char>(attr_text[i]))) ++i;
    std::size_t name_start = i;
    while (i < attr_text.size() && attr_text[i] != '=' &&
           !std::isspace(static_cast<unsigned char>(attr_text[i])))
      ++i;
    if (i == name_start) break;
    std::string name(attr_text.substr(name_start, i - name_start));
    while (i < attr_text.size() && std::isspace(static_cast<unsigned char>(attr_text[i]))) ++i;
    if (i >= attr_text.size() || attr_text[i] != '=') {
      out[name] = "";
      continue;
    }
    ++i;
    while (i < attr_text.size() && std::isspace(static_cast<unsigned char>(attr_text[i]))) ++i;
    if (i < attr_text.size() && (attr_text[i] == '"' || attr_text[i] == '\'')) {
      char q = attr_text[i++];
      std::size_t vstart = i;
      while (i < attr_text.size() && attr_text[i] != q) ++i;
      out[name] = decode_entities(attr_text.substr(vstart, i - vstart));
      if (i < attr_text.size()) ++i;
    }
  }
  return out;
}

// Parses one <item> subtree. The scanner sits just past the item start tag.
ExportItem parse_item(Scanner& sc, std::size_t item_offset) {
  ExportItem item;
  item.byte_offset = item_offset;
  bool have_url = false, have_method = false, have_status = false,
       have_mime = false, have_response = false;

  for (;;) {
    sc.skip_ws();
    if (sc.eof()) throw ItemError{"unterminated item"};
    if (sc.starts_with("</item")) {
      // consume "</item" [ws] ">"
      Scanner tail = sc;
      tail.seek(sc.pos() + 6);
      tail.skip_ws();
      if (tail.eof() || !tail.starts_with(">")) throw ItemError{"malformed item close tag"};
      sc.seek(tail.pos() + 1);
      break;
    }
    if (sc.starts_with("<!--")) {
      auto end = sc.find("-->", sc.pos() + 4);
      if (end == std::string_view::npos) throw ItemError{"unterminated comment"};
      sc.seek(end + 3);
      continue;
    }
    if (sc.starts_with("</")) throw ItemError{"mismatched close tag inside item"};
    if (sc.starts_with("<")) {
      std::string name, attr_text;
      bool empty = false;
      if (!sc.read_start_tag(name, attr_text, empty))
        throw ItemError{"malformed tag inside item"};
      std::string text;
      if (!empty) {
        if (!sc.read_content_until_close(name, text))
          throw ItemError{"unterminated element <" + name + ">"};
      }
      if (name == "url") {
        item.url = text;
        have_url = true;
      } else if (name == "method") {
        item.method = text;
        have_method = true;
      } else if (name == "status") {
        int v = 0;
        auto r = std::from_chars(text.data(), text.data() + text.size(), v);
        if (r.ec != std::errc() || r.ptr != text.data() + text.size())
          throw ItemError{"status is not an integer: '" + text + "'"};
        item.status = v;
        have_status = true;
      } else if (name == "mimetype") {
        item.mimetype = text;
        have_mime = true;
      } else if (name == "time") {
        item.time_text = text;
      } else if (name == "response") {
        auto attrs = parse_attrs(attr_text);
        auto it = attrs.find("base64");
        item.response_base64 = it != attrs.end() && it->second == "true";
        item.response_payload = std::move(text);
        have_response = true;
      }
      // other children (host, port, request, comment, ...) are tolerated
      continue;
    }
    // stray text between children: skip
    std::size_t before = sc.pos();
    while (!sc.eof() && !sc.starts_with("<")) sc.seek(sc.pos() + 1);
    if (sc.pos() == before) throw ItemError{"parser stuck inside item"};
  }

  if (!have_url) throw ItemError{"item missing url"};
  if (!have_method) throw ItemError{"item missing method"};
  if (!have_status) throw ItemError{"item missing status"};
  if (!have_mime) throw ItemError{"item missing mimetype"};
  if (!have_response) throw ItemError{"item missing response"};
  return item;
}

}  // namespace

util::Result<CaptureExport, NotAnExport> parse_export(std::string_view xml) {
  Scanner sc(xml);
  sc.skip_misc();

  std::string root, root_attrs;
  bool root_empty = false;
  if (sc.eof() || !sc.read_start_tag(root, root_attrs, root_empty))
    return NotAnExport{"no root element"};

  CaptureExport out;
  if (root_empty) return out;

  std::string root_close = "</" + root;
  for (;;) {
    sc.skip_ws();
    if (sc.eof()) break;  // missing root close tag; items already collected
    if (sc.starts_with(root_close)) break;
    if (sc.starts_with("<!--")) {
      auto end = sc.find("-->", sc.pos() + 4);
      if (end == std::string_view::npos) break;
      sc.seek(end + 3);
      continue;
    }
    if (sc.starts_with("<item") &&
        (sc.pos() + 5 >= xml.size() || xml[sc.pos() + 5] == '>' ||
         std::isspace(static_cast<unsigned char>(xml[sc.pos() + 5])) ||
         xml.compare(sc.pos() + 5, 1, "/") == 0)) {
      std::size_t item_offset = sc.pos();
      std::string name, attr_text;
      bool empty = false;
      if (!sc.read_start_tag(name, attr_text, empty)) {
        out.rejects.push_back({item_offset, "malformed item start tag"});
        auto next = sc.find("<item", item_offset + 1);
        if (next == std::string_view::npos) break;
        sc.seek(next);
        continue;
      }
      if (empty) {
        out.rejects.push_back({item_offset, "item missing url"});
        continue;
      }
      try {
        out.items.push_back(parse_item(sc, item_offset));
      } catch (const ItemError& e) {
        out.rejects.push_back({item_offset, e.reason});
        auto next = sc.find("<item", item_offset + 1);
        if (next == std::string_view::npos) break;
        sc.seek(next);
      }
      continue;
    }
    if (sc.starts_with("<")) {
      // non-item child of the root: skip its subtree
      std::string name, attr_text;
      bool empty = false;
      std::size_t off = sc.pos();
      if (!sc.read_start_tag(name, attr_text, empty)) {
        out.rejects.push_back({off, "malformed markup in export"});
        auto next = sc.find("<item", off + 1);
        if (next == std::string_view::npos) break;
        sc.seek(next);
        continue;
      }
      if (!empty) {
        std::string sink;
        if (!sc.read_content_until_close(name, sink)) {
          out.rejects.push_back({off, "unterminated element <" + name + ">"});
          auto next = sc.find("<item", off + 1);
          if (next == std::string_view::npos) break;
          sc.seek(next);
        }
      }
      continue;
    }
    // stray text between items
    while (!sc.eof() && !sc.starts_with("<")) sc.seek(sc.pos() + 1);
  }
  return out;
}

util::Result<CaptureExport, NotAnExport> parse_export(std::span<const std::uint8_t> xml) {
  return parse_export(std::string_view(reinterpret_cast<const char*>(xml.data()), xml.size()));
}

}  // namespace aft::ingest
