#include "georank/query.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>

#include "georank/text.hpp"

namespace georank {

const char* to_string(QueryKind k) {
  switch (k) {
    case QueryKind::PointRadius: return "PointRadius";
    case QueryKind::RouteBuffer: return "RouteBuffer";
    case QueryKind::RegionContain: return "RegionContain";
  }
  return "?";
}

void SpatialQuery::validate() const {
  auto all_points = [&] {
    return std::all_of(references.begin(), references.end(),
                       [](const geo::Geometry& g) { return g.kind() == geo::GeometryKind::Point; });
  };
  switch (kind) {
    case QueryKind::PointRadius:
      if (references.empty() || !all_points())
        throw ValidationError("PointRadius query needs at least one point reference");
      if (!eps_km || *eps_km <= 0.0)
        throw ValidationError("PointRadius query needs a positive radius");
      break;
    case QueryKind::RouteBuffer:
      if (references.size() != 2 || !all_points())
        throw ValidationError("RouteBuffer query needs exactly two point references");
      if (!eps_km || *eps_km <= 0.0)
        throw ValidationError("RouteBuffer query needs a positive buffer");
      break;
    case QueryKind::RegionContain:
      if (references.size() != 1 || !references.front().areal())
        throw ValidationError("RegionContain query needs exactly one areal reference");
      if (eps_km) throw ValidationError("RegionContain query takes no distance parameter");
      break;
  }
}

namespace {

bool has_token_prefix(const std::vector<std::string>& tokens, std::string_view prefix) {
  return std::any_of(tokens.begin(), tokens.end(), [&](const std::string& t) {
    return t.size() >= prefix.size() && std::string_view(t).substr(0, prefix.size()) == prefix;
  });
}

bool has_token(const std::vector<std::string>& tokens, std::string_view word) {
  return std::find(tokens.begin(), tokens.end(), word) != tokens.end();
}

bool has_route_cue(const std::string& question) {
  auto tokens = text::tokenize(question);
  if (has_token_prefix(tokens, "route") || has_token_prefix(tokens, "path") ||
      has_token(tokens, "between") || has_token(tokens, "along"))
    return true;
  return has_token(tokens, "from") && has_token(tokens, "to");
}

}  // namespace

double estimate_epsilon(const std::string& question, QueryKind kind) {
  std::string q = lowercase(question);
  auto tokens = text::tokenize(q);
  if (kind == QueryKind::RouteBuffer) {
    if (q.find("scenic") != std::string::npos || has_token_prefix(tokens, "explor")) return 3.0;
    if (has_token_prefix(tokens, "walk")) return 1.0;
    return 2.0;
  }
  // PointRadius (RegionContain never calls this).
  if (q.find("walking distance") != std::string::npos) return 2.0;
  if (q.find("not too far") != std::string::npos) return 3.0;
  if (has_token_prefix(tokens, "block")) return 1.5;
  if (has_token_prefix(tokens, "near") || has_token_prefix(tokens, "close")) return 1.0;
  return 1.0;
}

std::string categorize(const std::string& question) {
  auto tokens = text::tokenize(question);
  static const std::array<std::string_view, 21> restaurant = {
      "restaurant", "restaurants", "food",  "eat",    "eating", "dining", "dine",
      "meal",       "meals",       "cuisine", "breakfast", "lunch", "dinner", "brunch",
      "menu",       "dish",        "dishes", "chef",  "reservation", "pizza", "sushi"};
  static const std::array<std::string_view, 8> hotel = {
      "hotel", "hotels", "accommodation", "accommodations", "motel", "hostel", "inn", "lodging"};
  static const std::array<std::string_view, 12> attraction = {
      "visit",   "tour",        "explore",     "museum", "gallery",    "theater",
      "theatre", "sightseeing", "performance", "show",   "attraction", "attractions"};
  auto any = [&](const auto& set) {
    for (const auto& t : tokens)
      if (std::find(set.begin(), set.end(), std::string_view(t)) != set.end()) return true;
    return false;
  };
  bool cafe = has_token_prefix(tokens, "caf");  // cafe, cafes, café (tokenized as "caf")
  if (any(restaurant) || cafe) return "restaurant";
  if (any(hotel)) return "hotel";
  if (any(attraction)) return "attraction";
  return "amenity";
}

QueryIntent split_intent(const std::string& question) {
  QueryIntent intent;
  std::string spatial, semantic;
  for (const auto& sent : text::split_sentences(question)) {
    bool cue = false;
    for (const auto& t : text::tokenize(sent))
      if (text::is_spatial_cue(t)) {
        cue = true;
        break;
      }
    std::string& dst = cue ? spatial : semantic;
    if (!dst.empty()) dst += ' ';
    dst += sent;
    dst += '.';
  }
  intent.spatial_requirement = std::move(spatial);
  intent.semantic_requirement = std::move(semantic);
  intent.target_category = categorize(question);
  return intent;
}

ParsedQuery parse_rule_based(const std::string& question,
                             const std::vector<geo::Coord>& resolved_points,
                             const Gazetteer& gazetteer) {
  if (question.empty()) throw ValidationError("question is empty");

  ParsedQuery out;
  out.intent = split_intent(question);
  out.query.raw_question = question;
  out.query.target_category = out.intent.target_category;

  auto region = gazetteer.find_mention(question);

  if (resolved_points.size() == 2 && has_route_cue(question)) {
    out.query.kind = QueryKind::RouteBuffer;
    out.query.references.emplace_back(geo::Point{resolved_points[0]});
    out.query.references.emplace_back(geo::Point{resolved_points[1]});
    out.query.eps_km = estimate_epsilon(question, QueryKind::RouteBuffer);
  } else if (region) {
    out.query.kind = QueryKind::RegionContain;
    out.query.references.push_back(*gazetteer.lookup(*region));
  } else if (!resolved_points.empty()) {
    out.query.kind = QueryKind::PointRadius;
    for (const auto& c : resolved_points) out.query.references.emplace_back(geo::Point{c});
    out.query.eps_km = estimate_epsilon(question, QueryKind::PointRadius);
  } else {
    throw UnresolvedReference("no reference geometry: no resolvable points and no known region in '" +
                              question + "'");
  }
  out.query.validate();
  return out;
}

namespace {

std::optional<geo::Coord> parse_coord_literal(const std::string& s) {
  // Accepts "lon,lat" with optional surrounding parentheses and whitespace.
  std::string t;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c)) && c != '(' && c != ')') t.push_back(c);
  auto comma = t.find(',');
  if (comma == std::string::npos) return std::nullopt;
  double lon, lat;
  auto first = t.substr(0, comma);
  auto second = t.substr(comma + 1);
  auto r1 = std::from_chars(first.data(), first.data() + first.size(), lon);
  auto r2 = std::from_chars(second.data(), second.data() + second.size(), lat);
  if (r1.ec != std::errc() || r1.ptr != first.data() + first.size()) return std::nullopt;
  if (r2.ec != std::errc() || r2.ptr != second.data() + second.size()) return std::nullopt;
  if (lon < -180.0 || lon > 180.0 || lat < -90.0 || lat > 90.0) return std::nullopt;
  return geo::Coord{lon, lat};
}

}  // namespace

geo::Geometry resolve_geometry(const std::string& name_or_coords, const Gazetteer& gazetteer,
                               const PoiLookup& poi_lookup) {
  if (poi_lookup) {
    if (auto g = poi_lookup(name_or_coords)) return *g;
  }
  if (auto g = gazetteer.lookup(name_or_coords)) return *g;
  if (auto c = parse_coord_literal(name_or_coords)) return geo::Geometry(geo::Point{*c});
  throw NotFoundError("cannot resolve reference '" + name_or_coords +
                      "': not a POI name, region, or lon,lat pair");
}

CandidateQuery to_candidate_query(const SpatialQuery& sq) {
  sq.validate();
  CandidateQuery plan;
  if (!sq.target_category.empty()) plan.category = sq.target_category;
  switch (sq.kind) {
    case QueryKind::PointRadius: {
      plan.mode = CandidateQuery::Mode::WithinDistance;
      plan.eps_km = *sq.eps_km;
      if (sq.references.size() == 1) {
        plan.reference = sq.references.front();
      } else {
        std::vector<geo::Coord> pts;
        for (const auto& g : sq.references) pts.push_back(g.as<geo::Point>().at);
        plan.reference = geo::Geometry(geo::MultiPoint{std::move(pts)});
      }
      break;
    }
    case QueryKind::RouteBuffer: {
      plan.mode = CandidateQuery::Mode::WithinDistance;
      plan.eps_km = *sq.eps_km;
      plan.reference = geo::Geometry(geo::Polyline{
          {sq.references[0].as<geo::Point>().at, sq.references[1].as<geo::Point>().at}});
      break;
    }
    case QueryKind::RegionContain: {
      plan.mode = CandidateQuery::Mode::Contained;
      plan.reference = sq.references.front();
      break;
    }
  }
  return plan;
}

// ---------------------------------------------------------------------------
// DSL

namespace {

struct Cursor {
  const std::string& s;
  size_t pos = 0;
  int line = 1;
  int col = 1;

  void advance() {
    if (pos < s.size()) {
      if (s[pos] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++pos;
    }
  }

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) advance();
  }

  bool eof() {
    skip_ws();
    return pos >= s.size();
  }

  char peek() {
    skip_ws();
    return pos < s.size() ? s[pos] : '\0';
  }

  [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, line, col); }

  void expect(char c) {
    skip_ws();
    if (pos >= s.size() || s[pos] != c)
      fail(std::string("expected '") + c + "'");
    advance();
  }

  std::string ident() {
    skip_ws();
    size_t start = pos;
    while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_' ||
                              s[pos] == '-'))
      advance();
    if (pos == start) fail("expected identifier");
    return s.substr(start, pos - start);
  }

  double number() {
    skip_ws();
    size_t start = pos;
    while (pos < s.size() && (std::isdigit(static_cast<unsigned char>(s[pos])) || s[pos] == '.' ||
                              s[pos] == '-' || s[pos] == '+' || s[pos] == 'e' || s[pos] == 'E'))
      advance();
    double v = 0.0;
    auto r = std::from_chars(s.data() + start, s.data() + pos, v);
    if (pos == start || r.ec != std::errc() || r.ptr != s.data() + pos) fail("expected number");
    return v;
  }

  std::string quoted() {
    skip_ws();
    if (pos >= s.size() || s[pos] != '"') fail("expected quoted string");
    advance();
    std::string out;
    while (pos < s.size() && s[pos] != '"') {
      out.push_back(s[pos]);
      advance();
    }
    if (pos >= s.size()) fail("unterminated string");
    advance();
    return out;
  }
};

geo::Coord parse_coord(Cursor& cur) {
  double lon = cur.number();
  cur.expect(',');
  double lat = cur.number();
  if (lon < -180.0 || lon > 180.0) cur.fail("longitude out of range");
  if (lat < -90.0 || lat > 90.0) cur.fail("latitude out of range");
  return {lon, lat};
}

double parse_length_km(Cursor& cur) {
  double v = cur.number();
  std::string unit = cur.ident();
  if (unit == "km") return v;
  if (unit == "m") return v / 1000.0;
  cur.fail("expected length unit 'km' or 'm'");
}

std::string parse_optional_category(Cursor& cur) {
  if (cur.eof()) return {};
  std::string kw = cur.ident();
  if (kw != "category") cur.fail("expected 'category' or end of query");
  return cur.ident();
}

}  // namespace

ParsedQuery parse_dsl(const std::string& expression, const Gazetteer& gazetteer) {
  Cursor cur{expression};
  std::string head = cur.ident();

  ParsedQuery out;
  out.query.raw_question = expression;

  if (head == "point") {
    cur.expect('(');
    std::vector<geo::Coord> pts;
    pts.push_back(parse_coord(cur));
    while (cur.peek() == ';') {
      cur.expect(';');
      pts.push_back(parse_coord(cur));
    }
    cur.expect(')');
    std::string kw = cur.ident();
    if (kw != "radius") cur.fail("expected 'radius'");
    double eps = parse_length_km(cur);
    if (eps <= 0.0) cur.fail("radius must be positive");
    out.query.kind = QueryKind::PointRadius;
    for (const auto& c : pts) out.query.references.emplace_back(geo::Point{c});
    out.query.eps_km = eps;
  } else if (head == "route") {
    cur.expect('(');
    geo::Coord a = parse_coord(cur);
    cur.expect(';');
    geo::Coord b = parse_coord(cur);
    cur.expect(')');
    std::string kw = cur.ident();
    if (kw != "buffer") cur.fail("expected 'buffer'");
    double eps = parse_length_km(cur);
    if (eps <= 0.0) cur.fail("buffer must be positive");
    out.query.kind = QueryKind::RouteBuffer;
    out.query.references.emplace_back(geo::Point{a});
    out.query.references.emplace_back(geo::Point{b});
    out.query.eps_km = eps;
  } else if (head == "region") {
    cur.expect('(');
    std::string name = cur.quoted();
    cur.expect(')');
    auto poly = gazetteer.lookup(name);
    if (!poly) throw NotFoundError("unknown region '" + name + "'");
    out.query.kind = QueryKind::RegionContain;
    out.query.references.push_back(*poly);
  } else {
    cur.fail("expected 'point', 'route', or 'region'");
  }

  out.query.target_category = parse_optional_category(cur);
  if (!cur.eof()) cur.fail("trailing input after query");

  out.intent.target_category =
      out.query.target_category.empty() ? "amenity" : out.query.target_category;
  out.query.validate();
  return out;
}

}  // namespace georank
