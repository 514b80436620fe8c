#include "ccdp/mail.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <iterator>
#include <map>
#include <regex>
#include <sstream>
#include <utility>

namespace ccdp {
namespace {

using HeaderList = std::vector<std::pair<std::string, std::string>>;

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (char& ch : out) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return out;
}

std::string ascii_upper(std::string_view s) {
  std::string out(s);
  for (char& ch : out) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  return out;
}

std::string strip_cr(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] == '\r' && i + 1 < raw.size() && raw[i + 1] == '\n') continue;
    out.push_back(raw[i]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Transfer encodings

int hex_value(char ch) {
  if (ch >= '0' && ch <= '9') return ch - '0';
  if (ch >= 'a' && ch <= 'f') return ch - 'a' + 10;
  if (ch >= 'A' && ch <= 'F') return ch - 'A' + 10;
  return -1;
}

constexpr std::string_view kBase64Alphabet =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

std::string base64_decode(std::string_view in) {
  std::array<int, 256> table{};
  table.fill(-1);
  for (std::size_t i = 0; i < kBase64Alphabet.size(); ++i) {
    table[static_cast<unsigned char>(kBase64Alphabet[i])] = static_cast<int>(i);
  }
  std::string out;
  std::uint32_t buffer = 0;
  int bits = 0;
  for (char ch : in) {
    if (ch == '=') break;
    const int v = table[static_cast<unsigned char>(ch)];
    if (v < 0) continue;
    buffer = (buffer << 6) | static_cast<std::uint32_t>(v);
    bits += 6;
    if (bits >= 8) {
      bits -= 8;
      out.push_back(static_cast<char>((buffer >> bits) & 0xFF));
    }
  }
  return out;
}

std::string base64_encode(std::string_view in) {
  std::string out;
  out.reserve((in.size() + 2) / 3 * 4);
  std::size_t i = 0;
  for (; i + 2 < in.size(); i += 3) {
    const std::uint32_t n = (static_cast<unsigned char>(in[i]) << 16) |
                            (static_cast<unsigned char>(in[i + 1]) << 8) |
                            static_cast<unsigned char>(in[i + 2]);
    out.push_back(kBase64Alphabet[(n >> 18) & 63]);
    out.push_back(kBase64Alphabet[(n >> 12) & 63]);
    out.push_back(kBase64Alphabet[(n >> 6) & 63]);
    out.push_back(kBase64Alphabet[n & 63]);
  }
  if (i < in.size()) {
    std::uint32_t n = static_cast<unsigned char>(in[i]) << 16;
    if (i + 1 < in.size()) n |= static_cast<unsigned char>(in[i + 1]) << 8;
    out.push_back(kBase64Alphabet[(n >> 18) & 63]);
    out.push_back(kBase64Alphabet[(n >> 12) & 63]);
    out.push_back(i + 1 < in.size() ? kBase64Alphabet[(n >> 6) & 63] : '=');
    out.push_back('=');
  }
  return out;
}

std::string wrap_lines(std::string_view text, std::size_t width) {
  std::string out;
  for (std::size_t i = 0; i < text.size(); i += width) {
    out.append(text.substr(i, width));
    out.push_back('\n');
  }
  return out;
}

std::string quoted_printable_decode(std::string_view in, bool underscore_is_space) {
  std::string out;
  out.reserve(in.size());
  for (std::size_t i = 0; i < in.size(); ++i) {
    const char ch = in[i];
    if (ch == '=' && i + 1 < in.size() && in[i + 1] == '\n') {
      ++i;  // soft line break
    } else if (ch == '=' && i + 2 < in.size() && hex_value(in[i + 1]) >= 0 &&
               hex_value(in[i + 2]) >= 0) {
      out.push_back(static_cast<char>(hex_value(in[i + 1]) * 16 + hex_value(in[i + 2])));
      i += 2;
    } else if (ch == '_' && underscore_is_space) {
      out.push_back(' ');
    } else {
      out.push_back(ch);
    }
  }
  return out;
}

std::string latin1_to_utf8(std::string_view in) {
  std::string out;
  for (char c : in) {
    const auto ch = static_cast<unsigned char>(c);
    if (ch < 0x80) {
      out.push_back(static_cast<char>(ch));
    } else {
      out.push_back(static_cast<char>(0xC0 | (ch >> 6)));
      out.push_back(static_cast<char>(0x80 | (ch & 0x3F)));
    }
  }
  return out;
}

std::string to_utf8(std::string_view bytes, std::string_view charset) {
  const std::string cs = ascii_lower(charset);
  if (cs == "iso-8859-1" || cs == "latin1" || cs == "iso-8859-15" || cs == "windows-1252" ||
      cs == "cp1252") {
    return latin1_to_utf8(bytes);
  }
  return std::string(bytes);
}

std::string percent_decode(std::string_view in) {
  std::string out;
  for (std::size_t i = 0; i < in.size(); ++i) {
    if (in[i] == '%' && i + 2 < in.size() && hex_value(in[i + 1]) >= 0 && hex_value(in[i + 2]) >= 0) {
      out.push_back(static_cast<char>(hex_value(in[i + 1]) * 16 + hex_value(in[i + 2])));
      i += 2;
    } else {
      out.push_back(in[i]);
    }
  }
  return out;
}

std::string percent_encode(std::string_view in) {
  std::string out;
  for (char c : in) {
    const auto ch = static_cast<unsigned char>(c);
    if (std::isalnum(ch) || ch == '-' || ch == '.' || ch == '_' || ch == '~') {
      out.push_back(static_cast<char>(ch));
    } else {
      char buf[4];
      std::snprintf(buf, sizeof buf, "%%%02X", ch);
      out.append(buf);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Headers

// Splits a CR-stripped message into its unfolded header list and body.
std::pair<HeaderList, std::string_view> split_message(std::string_view text) {
  HeaderList headers;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    if (line.empty()) {
      pos = eol + 1;
      return {std::move(headers), pos <= text.size() ? text.substr(pos) : std::string_view{}};
    }
    if ((line[0] == ' ' || line[0] == '\t') && !headers.empty()) {
      headers.back().second.append(line);
    } else {
      const auto colon = line.find(':');
      if (colon != std::string_view::npos && colon > 0) {
        headers.emplace_back(ascii_lower(trim(line.substr(0, colon))),
                             std::string(line.substr(colon + 1)));
      }
    }
    pos = eol + 1;
  }
  return {std::move(headers), std::string_view{}};
}

const std::string* header(const HeaderList& headers, std::string_view name) {
  for (const auto& [key, value] : headers) {
    if (key == name) return &value;
  }
  return nullptr;
}

std::vector<const std::string*> headers_named(const HeaderList& headers, std::string_view name) {
  std::vector<const std::string*> out;
  for (const auto& [key, value] : headers) {
    if (key == name) out.push_back(&value);
  }
  return out;
}

// Splits an address-list on commas and semicolons outside quotes, comments and
// angle brackets. Group display names ("team: a@b, c@d;") are dropped.
std::vector<std::string> split_address_list(std::string_view value) {
  std::vector<std::string> out;
  std::string current;
  bool quoted = false;
  int angle = 0;
  int paren = 0;
  for (char ch : value) {
    if (quoted) {
      current.push_back(ch);
      if (ch == '"') quoted = false;
      continue;
    }
    if (ch == '"') {
      quoted = true;
    } else if (ch == '(') {
      ++paren;
    } else if (ch == ')') {
      if (paren > 0) --paren;
    } else if (ch == '<') {
      ++angle;
    } else if (ch == '>') {
      if (angle > 0) --angle;
    } else if (paren == 0 && angle == 0 && ch == ':') {
      current.clear();
      continue;
    } else if (paren == 0 && angle == 0 && (ch == ',' || ch == ';')) {
      out.push_back(std::move(current));
      current.clear();
      continue;
    }
    current.push_back(ch);
  }
  out.push_back(std::move(current));
  return out;
}

std::vector<Interlocutor> parse_address_headers(const HeaderList& headers, std::string_view name) {
  std::vector<Interlocutor> out;
  for (const std::string* value : headers_named(headers, name)) {
    for (const auto& item : split_address_list(*value)) {
      if (auto p = Interlocutor::parse(item)) out.push_back(std::move(*p));
    }
  }
  return out;
}

std::vector<std::string> angle_tokens(std::string_view value) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    const auto open = value.find('<', pos);
    if (open == std::string_view::npos) break;
    const auto close = value.find('>', open);
    if (close == std::string_view::npos) break;
    std::string id = normalize_message_id(value.substr(open + 1, close - open - 1));
    if (!id.empty()) out.push_back(std::move(id));
    pos = close + 1;
  }
  return out;
}

std::vector<std::string> parse_id_list(std::string_view value) {
  auto ids = angle_tokens(value);
  if (!ids.empty()) return ids;
  std::istringstream in{std::string(value)};
  std::string token;
  while (in >> token) {
    if (token.find('@') != std::string::npos) ids.push_back(normalize_message_id(token));
  }
  return ids;
}

// Content-Type / Content-Disposition value with parameters. RFC 2231
// continuations and charset prefixes are folded into plain UTF-8 values.
struct HeaderValue {
  std::string value;  // lowercased token before the first ';'
  std::map<std::string, std::string> params;
};

HeaderValue parse_header_value(std::string_view raw) {
  HeaderValue out;
  std::vector<std::string> pieces;
  std::string current;
  bool quoted = false;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const char ch = raw[i];
    if (quoted) {
      if (ch == '\\' && i + 1 < raw.size()) {
        current.push_back(raw[++i]);
      } else if (ch == '"') {
        quoted = false;
      } else {
        current.push_back(ch);
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ';') {
      pieces.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(ch);
    }
  }
  pieces.push_back(std::move(current));
  out.value = ascii_lower(trim(pieces.front()));

  struct Segmented {
    std::map<int, std::pair<std::string, bool>> parts;  // index -> (value, encoded)
  };
  std::map<std::string, Segmented> extended;
  for (std::size_t i = 1; i < pieces.size(); ++i) {
    const auto eq = pieces[i].find('=');
    if (eq == std::string::npos) continue;
    std::string key = ascii_lower(trim(std::string_view(pieces[i]).substr(0, eq)));
    std::string value(trim(std::string_view(pieces[i]).substr(eq + 1)));
    const auto star = key.find('*');
    if (star == std::string::npos) {
      out.params[key] = std::move(value);
      continue;
    }
    const std::string base = key.substr(0, star);
    std::string rest = key.substr(star + 1);
    bool encoded = false;
    if (!rest.empty() && rest.back() == '*') {
      encoded = true;
      rest.pop_back();
    }
    int index = 0;
    if (rest.empty()) {
      encoded = true;  // "name*=..."
    } else {
      index = std::atoi(rest.c_str());
    }
    extended[base].parts[index] = {std::move(value), encoded};
  }
  for (auto& [base, seg] : extended) {
    std::string bytes;
    std::string charset;
    bool first = true;
    for (auto& [index, part] : seg.parts) {
      std::string piece = part.first;
      if (part.second) {
        if (first) {
          const auto q1 = piece.find('\'');
          const auto q2 = q1 == std::string::npos ? q1 : piece.find('\'', q1 + 1);
          if (q2 != std::string::npos) {
            charset = piece.substr(0, q1);
            piece = piece.substr(q2 + 1);
          }
        }
        piece = percent_decode(piece);
      }
      bytes += piece;
      first = false;
    }
    out.params[base] = to_utf8(bytes, charset.empty() ? "utf-8" : charset);
  }
  return out;
}

std::string decode_transfer(std::string_view body, const HeaderList& headers) {
  const std::string* cte = header(headers, "content-transfer-encoding");
  const std::string encoding = cte ? ascii_lower(trim(*cte)) : std::string();
  if (encoding == "base64") return base64_decode(body);
  if (encoding == "quoted-printable") return quoted_printable_decode(body, false);
  return std::string(body);
}

struct MimeLeaf {
  HeaderValue content_type;
  std::optional<std::string> filename;
  std::string decoded;
};

void collect_leaves(const HeaderList& headers, std::string_view body, int depth,
                    std::vector<MimeLeaf>& leaves) {
  const std::string* ct_raw = header(headers, "content-type");
  HeaderValue ct = parse_header_value(ct_raw ? std::string_view(*ct_raw) : "text/plain");
  if (ct.value.empty()) ct.value = "text/plain";

  if (ct.value.rfind("multipart/", 0) == 0 && depth < 16) {
    const auto b = ct.params.find("boundary");
    if (b != ct.params.end() && !b->second.empty()) {
      const std::string delimiter = "--" + b->second;
      std::vector<std::string_view> parts;
      std::size_t pos = 0;
      std::optional<std::size_t> part_start;
      while (pos <= body.size()) {
        std::size_t eol = body.find('\n', pos);
        if (eol == std::string_view::npos) eol = body.size();
        const std::string_view line = body.substr(pos, eol - pos);
        const std::string_view stripped = trim(line);
        const bool is_close = stripped == delimiter + "--";
        if (stripped == delimiter || is_close) {
          if (part_start) {
            std::size_t end = pos > 0 ? pos - 1 : 0;  // drop the newline before the delimiter
            if (end < *part_start) end = *part_start;
            parts.push_back(body.substr(*part_start, end - *part_start));
          }
          part_start = eol + 1;
          if (is_close) break;
        }
        if (eol == body.size()) break;
        pos = eol + 1;
      }
      for (std::string_view part : parts) {
        auto [part_headers, part_body] = split_message(part);
        collect_leaves(part_headers, part_body, depth + 1, leaves);
      }
      return;
    }
  }

  MimeLeaf leaf;
  leaf.content_type = ct;
  if (const std::string* cd = header(headers, "content-disposition")) {
    const HeaderValue disposition = parse_header_value(*cd);
    const auto f = disposition.params.find("filename");
    if (f != disposition.params.end() && !f->second.empty()) leaf.filename = f->second;
  }
  if (!leaf.filename) {
    const auto n = ct.params.find("name");
    if (n != ct.params.end() && !n->second.empty()) leaf.filename = n->second;
  }
  if (leaf.filename) leaf.filename = decode_encoded_words(*leaf.filename);
  leaf.decoded = decode_transfer(body, headers);
  leaves.push_back(std::move(leaf));
}

std::uint64_t fnv1a(std::string_view data) {
  std::uint64_t h = 1469598103934665603ULL;
  for (char ch : data) {
    h ^= static_cast<unsigned char>(ch);
    h *= 1099511628211ULL;
  }
  return h;
}

std::string unescape_ical_text(std::string_view value) {
  std::string out;
  for (std::size_t i = 0; i < value.size(); ++i) {
    if (value[i] == '\\' && i + 1 < value.size()) {
      const char next = value[++i];
      out.push_back(next == 'n' || next == 'N' ? '\n' : next);
    } else {
      out.push_back(value[i]);
    }
  }
  return out;
}

bool is_notification_method(std::string_view method) {
  return method == "REQUEST" || method == "REPLY" || method == "CANCEL";
}

}  // namespace

std::string decode_encoded_words(std::string_view text) {
  static const std::regex kWord(R"(=\?([^?\s]+)\?([QqBb])\?([^?\s]*)\?=)");
  std::string out;
  auto begin = std::regex_iterator<std::string_view::const_iterator>(text.begin(), text.end(), kWord);
  const decltype(begin) end;
  std::size_t last = 0;
  bool previous_was_word = false;
  for (auto it = begin; it != end; ++it) {
    const auto& m = *it;
    const auto start = static_cast<std::size_t>(m.position(0));
    const std::string_view gap = text.substr(last, start - last);
    // Whitespace between adjacent encoded words is not part of the text.
    if (!(previous_was_word && trim(gap).empty())) out.append(gap);
    std::string charset = m[1].str();
    if (const auto star = charset.find('*'); star != std::string::npos) charset.resize(star);
    const std::string payload = m[3].str();
    const bool b = m[2].str() == "B" || m[2].str() == "b";
    const std::string bytes = b ? base64_decode(payload) : quoted_printable_decode(payload, true);
    out += to_utf8(bytes, charset);
    last = start + static_cast<std::size_t>(m.length(0));
    previous_was_word = true;
  }
  out.append(text.substr(last));
  return out;
}

CalendarPart parse_icalendar(std::string_view text) {
  // Unfold: a newline followed by a space or tab continues the previous line.
  const std::string cleaned = strip_cr(text);
  std::vector<std::string> lines;
  std::size_t pos = 0;
  while (pos < cleaned.size()) {
    std::size_t eol = cleaned.find('\n', pos);
    if (eol == std::string::npos) eol = cleaned.size();
    const std::string_view line = std::string_view(cleaned).substr(pos, eol - pos);
    if (!line.empty() && (line[0] == ' ' || line[0] == '\t') && !lines.empty()) {
      lines.back().append(line.substr(1));
    } else {
      lines.emplace_back(line);
    }
    pos = eol + 1;
  }

  CalendarPart part;
  int event_depth = 0;
  bool seen_event = false;
  for (const auto& line : lines) {
    const auto colon = line.find(':');
    if (colon == std::string::npos) continue;
    std::string name = ascii_upper(std::string_view(line).substr(0, colon));
    if (const auto semi = name.find(';'); semi != std::string::npos) name.resize(semi);
    const std::string_view value = std::string_view(line).substr(colon + 1);
    if (name == "BEGIN" && ascii_upper(trim(value)) == "VEVENT") {
      ++event_depth;
      continue;
    }
    if (name == "END" && ascii_upper(trim(value)) == "VEVENT") {
      if (event_depth > 0) --event_depth;
      seen_event = true;
      continue;
    }
    if (name == "METHOD" && !part.method) {
      part.method = ascii_upper(trim(value));
    } else if (event_depth > 0 && !seen_event) {
      if (name == "UID" && !part.uid) {
        part.uid = std::string(trim(value));
      } else if (name == "LOCATION" && part.location.empty()) {
        part.location = unescape_ical_text(value);
      } else if (name == "DESCRIPTION" && part.description.empty()) {
        part.description = unescape_ical_text(value);
      }
    }
  }
  if (part.uid && part.uid->empty()) part.uid.reset();
  if (part.method && part.method->empty()) part.method.reset();
  return part;
}

KindClassification classify_calendar(std::span<const CalendarPart> parts, const IngestOptions& options) {
  std::optional<std::regex> conference;
  if (options.require_conference_link) {
    conference.emplace(options.conference_url_pattern, std::regex::ECMAScript | std::regex::icase);
  }
  const CalendarPart* notification = nullptr;
  const CalendarPart* meeting = nullptr;
  for (const auto& part : parts) {
    if (!part.uid) continue;
    if (conference && !std::regex_search(part.location, *conference) &&
        !std::regex_search(part.description, *conference)) {
      continue;
    }
    if (part.method && is_notification_method(*part.method)) {
      if (!notification) notification = &part;
    } else if (!part.method || *part.method == "PUBLISH") {
      if (!meeting) meeting = &part;
    }
  }
  if (notification) return {MessageKind::kMeetingNotification, notification->uid};
  if (meeting) return {MessageKind::kMeeting, meeting->uid};
  return {};
}

MessageKind classify_kind(std::span<const CalendarPart> parts, const IngestOptions& options) {
  return classify_calendar(parts, options).kind;
}

Message parse_eml(std::string_view raw, const IngestOptions& options) {
  const std::string text = strip_cr(raw);
  auto [headers, body] = split_message(text);

  Message m;
  const std::string* from = header(headers, "from");
  if (from == nullptr) throw Error(ErrorCode::kMalformedHeaders, "missing From header");
  std::optional<Interlocutor> sender;
  for (const auto& item : split_address_list(*from)) {
    if ((sender = Interlocutor::parse(item))) break;
  }
  if (!sender) throw Error(ErrorCode::kMalformedHeaders, "unparseable From header: " + std::string(trim(*from)));
  m.from = std::move(*sender);

  const std::string* date = header(headers, "date");
  if (date == nullptr) throw Error(ErrorCode::kUnparseableDate, "missing Date header");
  const auto sent = parse_rfc5322_date(*date);
  if (!sent) throw Error(ErrorCode::kUnparseableDate, "cannot parse Date: " + std::string(trim(*date)));
  m.sent_at = *sent;

  m.to = parse_address_headers(headers, "to");
  m.cc = parse_address_headers(headers, "cc");
  // Bcc is never modelled.

  if (const std::string* id = header(headers, "message-id")) {
    const auto ids = angle_tokens(*id);
    m.id = ids.empty() ? normalize_message_id(*id) : ids.front();
  }
  if (m.id.empty()) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "synthetic-%016llx@ccdp.invalid",
                  static_cast<unsigned long long>(fnv1a(text)));
    m.id = buf;
  }

  if (const std::string* subject = header(headers, "subject")) {
    m.subject = decode_encoded_words(trim(*subject));
  }
  for (const std::string* refs : headers_named(headers, "references")) {
    for (auto& id : parse_id_list(*refs)) m.references.push_back(std::move(id));
  }
  if (const std::string* irt = header(headers, "in-reply-to")) {
    const auto ids = parse_id_list(*irt);
    if (!ids.empty()) m.in_reply_to = ids.front();
  }

  std::vector<MimeLeaf> leaves;
  collect_leaves(headers, body, 0, leaves);
  std::vector<CalendarPart> calendars;
  bool body_found = false;
  for (auto& leaf : leaves) {
    const std::string& type = leaf.content_type.value;
    if (type == "text/calendar" || type == "application/ics") {
      CalendarPart cal = parse_icalendar(leaf.decoded);
      if (!cal.method) {
        const auto method = leaf.content_type.params.find("method");
        if (method != leaf.content_type.params.end()) cal.method = ascii_upper(trim(method->second));
      }
      calendars.push_back(std::move(cal));
    } else if (leaf.filename) {
      m.attachments.push_back(*leaf.filename);
    } else if (!body_found && type == "text/plain") {
      const auto cs = leaf.content_type.params.find("charset");
      m.body = to_utf8(leaf.decoded, cs == leaf.content_type.params.end() ? "" : cs->second);
      body_found = true;
    }
  }
  const auto kind = classify_calendar(calendars, options);
  m.kind = kind.kind;
  m.ical_uid = kind.ical_uid;
  return m;
}

namespace {

// "From sender asctime-date": a body line that merely starts with "From "
// has no clock time and is kept as text.
bool is_from_line(std::string_view line) {
  static const std::regex pattern(R"(^From \S+ +.*\b\d{1,2}:\d{2}(:\d{2})?\b.*$)");
  return line.rfind("From ", 0) == 0 && std::regex_match(line.begin(), line.end(), pattern);
}

}  // namespace

MboxResult parse_mbox(std::string_view data, const IngestOptions& options) {
  MboxResult result;
  struct Entry {
    std::size_t offset;
    std::string content;
  };
  std::vector<Entry> entries;
  std::size_t pos = 0;
  bool after_blank = true;
  while (pos < data.size()) {
    std::size_t eol = data.find('\n', pos);
    if (eol == std::string_view::npos) eol = data.size();
    std::string_view line = data.substr(pos, eol - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const bool separator = after_blank && is_from_line(line);
    after_blank = line.empty();
    if (separator) {
      entries.push_back({pos, {}});
    } else {
      if (entries.empty()) {
        if (trim(line).empty()) {
          pos = eol + 1;
          continue;
        }
        entries.push_back({pos, {}});
      }
      // mboxrd: one leading '>' is removed from ">From " lines.
      std::size_t quotes = 0;
      while (quotes < line.size() && line[quotes] == '>') ++quotes;
      if (quotes > 0 && line.substr(quotes).rfind("From ", 0) == 0) line.remove_prefix(1);
      entries.back().content.append(line);
      entries.back().content.push_back('\n');
    }
    pos = eol + 1;
  }
  for (auto& entry : entries) {
    if (trim(entry.content).empty()) {
      result.warnings.push_back({entry.offset, "empty mbox entry"});
      continue;
    }
    try {
      result.messages.push_back(parse_eml(entry.content, options));
    } catch (const Error& e) {
      result.warnings.push_back({entry.offset, e.what()});
    }
  }
  return result;
}

MboxResult parse_mbox(std::istream& in, const IngestOptions& options) {
  std::string data{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  if (in.bad()) throw Error(ErrorCode::kIoFailure, "failed reading mbox stream");
  return parse_mbox(std::string_view(data), options);
}

namespace {

std::string encode_header_text(std::string_view text) {
  // Chunks keep each encoded word short; the decoder concatenates bytes.
  std::string out;
  for (std::size_t i = 0; i < text.size(); i += 45) {
    if (!out.empty()) out += "\n ";
    out += "=?UTF-8?B?" + base64_encode(text.substr(i, 45)) + "?=";
  }
  return out;
}

std::string join_addresses(const std::vector<Interlocutor>& people) {
  std::string out;
  for (const auto& p : people) {
    if (!out.empty()) out += ", ";
    out += "<" + p.address() + ">";
  }
  return out;
}

}  // namespace

std::string to_eml(const Message& message) {
  std::ostringstream out;
  out << "Message-ID: <" << message.id << ">\n";
  out << "Date: " << format_rfc5322(message.sent_at) << "\n";
  out << "From: <" << message.from.address() << ">\n";
  if (!message.to.empty()) out << "To: " << join_addresses(message.to) << "\n";
  if (!message.cc.empty()) out << "Cc: " << join_addresses(message.cc) << "\n";
  if (!message.subject.empty()) out << "Subject: " << encode_header_text(message.subject) << "\n";
  if (!message.references.empty()) {
    out << "References:";
    for (const auto& r : message.references) out << " <" << r << ">";
    out << "\n";
  }
  if (message.in_reply_to) out << "In-Reply-To: <" << *message.in_reply_to << ">\n";
  out << "MIME-Version: 1.0\n";

  const std::string boundary = "ccdp-boundary-" + std::to_string(fnv1a(message.id));
  out << "Content-Type: multipart/mixed; boundary=\"" << boundary << "\"\n\n";
  out << "--" << boundary << "\n";
  out << "Content-Type: text/plain; charset=utf-8\n";
  out << "Content-Transfer-Encoding: base64\n\n";
  out << wrap_lines(base64_encode(message.body), 76);

  if (message.kind != MessageKind::kEmail && message.ical_uid) {
    const std::string method = message.kind == MessageKind::kMeeting ? "PUBLISH" : "REQUEST";
    std::string ical = "BEGIN:VCALENDAR\nVERSION:2.0\nMETHOD:" + method +
                       "\nBEGIN:VEVENT\nUID:" + *message.ical_uid + "\nEND:VEVENT\nEND:VCALENDAR\n";
    out << "--" << boundary << "\n";
    out << "Content-Type: text/calendar; charset=utf-8; method=" << method << "\n";
    out << "Content-Transfer-Encoding: base64\n\n";
    out << wrap_lines(base64_encode(ical), 76);
  }
  for (const auto& name : message.attachments) {
    out << "--" << boundary << "\n";
    out << "Content-Type: application/octet-stream\n";
    out << "Content-Disposition: attachment; filename*=UTF-8''" << percent_encode(name) << "\n";
    out << "Content-Transfer-Encoding: base64\n\n";
  }
  out << "--" << boundary << "--\n";
  return out.str();
}

namespace {

std::string asctime_utc(Timestamp t) {
  const std::time_t secs = t.time_since_epoch().count();
  std::tm tm{};
  gmtime_r(&secs, &tm);
  char buf[64];
  std::strftime(buf, sizeof buf, "%a %b %e %H:%M:%S %Y", &tm);
  return buf;
}

}  // namespace

std::string to_mbox(std::span<const Message> messages) {
  std::string out;
  for (const auto& m : messages) {
    out += "From " + m.from.address() + " " + asctime_utc(m.sent_at) + "\n";
    const std::string eml = to_eml(m);
    std::size_t pos = 0;
    while (pos < eml.size()) {
      std::size_t eol = eml.find('\n', pos);
      if (eol == std::string::npos) eol = eml.size();
      std::string_view line = std::string_view(eml).substr(pos, eol - pos);
      std::size_t quotes = 0;
      while (quotes < line.size() && line[quotes] == '>') ++quotes;
      if (line.substr(quotes).rfind("From ", 0) == 0) out.push_back('>');
      out.append(line);
      out.push_back('\n');
      pos = eol + 1;
    }
    out.push_back('\n');
  }
  return out;
}

}  // namespace ccdp
