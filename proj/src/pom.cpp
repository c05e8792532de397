#include "builddiff/pom.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

namespace builddiff {

namespace {

constexpr int kMaxDepth = 512;

bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r';
}

std::string trim(const std::string& s) {
    size_t b = 0, e = s.size();
    while (b < e && is_space(s[b])) ++b;
    while (e > b && is_space(s[e - 1])) --e;
    return s.substr(b, e - b);
}

// Strips any namespace prefix: "mvn:project" -> "project".
std::string local_name(const std::string& name) {
    auto pos = name.rfind(':');
    return pos == std::string::npos ? name : name.substr(pos + 1);
}

// Recursive-descent reader over the XML subset that occurs in pom files:
// prolog, comments, PIs, CDATA, attributes (validated then dropped) and the
// five predefined plus numeric character entities.
class XmlReader {
public:
    explicit XmlReader(const std::string& text) : text_(text) {
        // UTF-8 BOM
        if (text_.size() >= 3 && (unsigned char)text_[0] == 0xEF &&
            (unsigned char)text_[1] == 0xBB && (unsigned char)text_[2] == 0xBF) {
            pos_ = 3;
        }
    }

    BuildNode parse_document() {
        skip_misc(true);
        if (eof() || peek() != '<')
            fail("expected root element");
        BuildNode root = parse_element(0);
        skip_misc(false);
        if (!eof())
            fail("content after root element");
        return root;
    }

private:
    const std::string& text_;
    size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& why) const {
        throw MalformedXml(why + " at offset " + std::to_string(pos_));
    }

    bool eof() const { return pos_ >= text_.size(); }
    char peek() const { return text_[pos_]; }
    bool starts_with(const char* s) const {
        return text_.compare(pos_, std::char_traits<char>::length(s), s) == 0;
    }

    void skip_ws() {
        while (!eof() && is_space(peek())) ++pos_;
    }

    // Whitespace, comments, PIs and (before the root) an XML declaration
    // or DOCTYPE without internal subset.
    void skip_misc(bool prolog) {
        for (;;) {
            skip_ws();
            if (eof()) return;
            if (starts_with("<!--")) {
                skip_comment();
            } else if (starts_with("<?")) {
                skip_until("?>");
            } else if (prolog && starts_with("<!DOCTYPE")) {
                skip_doctype();
            } else {
                return;
            }
        }
    }

    void skip_comment() {
        pos_ += 4;
        auto end = text_.find("-->", pos_);
        if (end == std::string::npos) fail("unterminated comment");
        pos_ = end + 3;
    }

    void skip_until(const char* terminator) {
        auto end = text_.find(terminator, pos_);
        if (end == std::string::npos) fail("unterminated markup");
        pos_ = end + std::char_traits<char>::length(terminator);
    }

    void skip_doctype() {
        auto end = text_.find('>', pos_);
        if (end == std::string::npos) fail("unterminated DOCTYPE");
        auto bracket = text_.find('[', pos_);
        if (bracket != std::string::npos && bracket < end)
            fail("DOCTYPE internal subset not supported");
        pos_ = end + 1;
    }

    std::string read_name() {
        size_t start = pos_;
        while (!eof() && !is_space(peek()) && peek() != '>' && peek() != '/' &&
               peek() != '=' && peek() != '<')
            ++pos_;
        if (pos_ == start) fail("expected name");
        return text_.substr(start, pos_ - start);
    }

    // Attributes are syntax-checked and discarded.
    void skip_attributes() {
        for (;;) {
            skip_ws();
            if (eof()) fail("unterminated start tag");
            if (peek() == '>' || peek() == '/') return;
            read_name();
            skip_ws();
            if (eof() || peek() != '=') fail("expected '=' in attribute");
            ++pos_;
            skip_ws();
            if (eof() || (peek() != '"' && peek() != '\''))
                fail("expected quoted attribute value");
            char quote = peek();
            ++pos_;
            auto end = text_.find(quote, pos_);
            if (end == std::string::npos) fail("unterminated attribute value");
            pos_ = end + 1;
        }
    }

    std::string decode_entity() {
        // pos_ is at '&'
        auto end = text_.find(';', pos_);
        if (end == std::string::npos || end - pos_ > 12) fail("bad entity");
        std::string ent = text_.substr(pos_ + 1, end - pos_ - 1);
        pos_ = end + 1;
        if (ent == "amp") return "&";
        if (ent == "lt") return "<";
        if (ent == "gt") return ">";
        if (ent == "apos") return "'";
        if (ent == "quot") return "\"";
        if (!ent.empty() && ent[0] == '#') {
            long code = 0;
            try {
                code = (ent.size() > 1 && (ent[1] == 'x' || ent[1] == 'X'))
                           ? std::stol(ent.substr(2), nullptr, 16)
                           : std::stol(ent.substr(1), nullptr, 10);
            } catch (const std::exception&) {
                fail("bad character reference");
            }
            if (code <= 0 || code > 0x10FFFF) fail("character reference out of range");
            return encode_utf8(static_cast<unsigned long>(code));
        }
        fail("unknown entity '&" + ent + ";'");
    }

    static std::string encode_utf8(unsigned long c) {
        std::string out;
        if (c < 0x80) {
            out += char(c);
        } else if (c < 0x800) {
            out += char(0xC0 | (c >> 6));
            out += char(0x80 | (c & 0x3F));
        } else if (c < 0x10000) {
            out += char(0xE0 | (c >> 12));
            out += char(0x80 | ((c >> 6) & 0x3F));
            out += char(0x80 | (c & 0x3F));
        } else {
            out += char(0xF0 | (c >> 18));
            out += char(0x80 | ((c >> 12) & 0x3F));
            out += char(0x80 | ((c >> 6) & 0x3F));
            out += char(0x80 | (c & 0x3F));
        }
        return out;
    }

    BuildNode parse_element(int depth) {
        if (depth > kMaxDepth) fail("element nesting too deep");
        ++pos_; // consume '<'
        BuildNode node;
        node.tag = local_name(read_name());
        if (node.tag.empty()) fail("empty element name");
        skip_attributes();
        if (peek() == '/') {
            ++pos_;
            if (eof() || peek() != '>') fail("malformed empty-element tag");
            ++pos_;
            return node;
        }
        ++pos_; // consume '>'

        std::string text;
        for (;;) {
            if (eof()) fail("unterminated element <" + node.tag + ">");
            if (peek() == '<') {
                if (starts_with("</")) {
                    pos_ += 2;
                    std::string close = local_name(read_name());
                    skip_ws();
                    if (eof() || peek() != '>') fail("malformed end tag");
                    ++pos_;
                    if (close != node.tag)
                        fail("mismatched end tag </" + close + "> for <" + node.tag + ">");
                    break;
                }
                if (starts_with("<!--")) {
                    skip_comment();
                } else if (starts_with("<![CDATA[")) {
                    pos_ += 9;
                    auto end = text_.find("]]>", pos_);
                    if (end == std::string::npos) fail("unterminated CDATA");
                    text.append(text_, pos_, end - pos_);
                    pos_ = end + 3;
                } else if (starts_with("<?")) {
                    skip_until("?>");
                } else {
                    BuildNode child = parse_element(depth + 1);
                    child.position = static_cast<int>(node.children.size());
                    node.children.push_back(std::move(child));
                }
            } else if (peek() == '&') {
                text += decode_entity();
            } else {
                text += peek();
                ++pos_;
            }
        }

        std::string trimmed = trim(text);
        if (!trimmed.empty()) {
            if (!node.children.empty())
                throw MixedContent("element <" + node.tag +
                                   "> has both text and child elements");
            node.value = std::move(trimmed);
        }
        return node;
    }
};

void escape_text(const std::string& s, std::string& out) {
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += c;
        }
    }
}

void write_pretty(const BuildNode& n, int depth, std::string& out) {
    out.append(static_cast<size_t>(depth) * 2, ' ');
    if (n.children.empty() && !n.has_value()) {
        out += "<" + n.tag + "/>\n";
        return;
    }
    out += "<" + n.tag + ">";
    if (n.children.empty()) {
        escape_text(n.value, out);
    } else {
        out += "\n";
        for (const auto& c : n.children) write_pretty(c, depth + 1, out);
        out.append(static_cast<size_t>(depth) * 2, ' ');
    }
    out += "</" + n.tag + ">\n";
}

void write_compact(const BuildNode& n, std::string& out) {
    if (n.children.empty() && !n.has_value()) {
        out += "<" + n.tag + "/>";
        return;
    }
    out += "<" + n.tag + ">";
    if (n.children.empty()) {
        escape_text(n.value, out);
    } else {
        for (const auto& c : n.children) write_compact(c, out);
    }
    out += "</" + n.tag + ">";
}

// Sort key content: a leaf contributes its value, a container the
// concatenation of its children's (tag, content) keys. The separators keep
// the key injective so that equal keys imply equal subtrees.
std::string normalize_node(BuildNode& n) {
    if (n.children.empty()) return n.value;

    std::vector<std::string> keys(n.children.size());
    for (size_t i = 0; i < n.children.size(); ++i)
        keys[i] = normalize_node(n.children[i]);

    std::vector<size_t> order(n.children.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        if (n.children[a].tag != n.children[b].tag)
            return n.children[a].tag < n.children[b].tag;
        return keys[a] < keys[b];
    });

    std::vector<BuildNode> sorted;
    sorted.reserve(n.children.size());
    std::string content;
    for (size_t i = 0; i < order.size(); ++i) {
        sorted.push_back(std::move(n.children[order[i]]));
        sorted.back().position = static_cast<int>(i);
        content += '\x1e';
        content += sorted.back().tag;
        content += '\x1f';
        content += keys[order[i]];
    }
    n.children = std::move(sorted);
    return content;
}

} // namespace

const BuildNode* BuildNode::child(const std::string& child_tag) const {
    for (const auto& c : children)
        if (c.tag == child_tag) return &c;
    return nullptr;
}

BuildTree parse_pom(const std::string& document_text, std::string source_id) {
    XmlReader reader(document_text);
    BuildNode root = reader.parse_document();
    if (root.tag != "project")
        throw UnexpectedRoot("root element is <" + root.tag + ">, expected <project>" +
                             (source_id.empty() ? "" : " in " + source_id));
    return BuildTree{std::move(root), std::move(source_id)};
}

void normalize_in_place(BuildNode& node) {
    normalize_node(node);
    node.position = 0;
}

BuildTree normalize(BuildTree tree) {
    normalize_in_place(tree.root);
    return tree;
}

std::string to_xml(const BuildNode& node) {
    std::string out;
    write_pretty(node, 0, out);
    return out;
}

std::string to_xml(const BuildTree& tree) {
    return to_xml(tree.root);
}

std::string to_compact_xml(const BuildNode& node) {
    std::string out;
    write_compact(node, out);
    return out;
}

bool subtree_equal(const BuildNode& a, const BuildNode& b) {
    if (a.tag != b.tag || a.value != b.value || a.children.size() != b.children.size())
        return false;
    for (size_t i = 0; i < a.children.size(); ++i)
        if (!subtree_equal(a.children[i], b.children[i])) return false;
    return true;
}

} // namespace builddiff
