// Copyright 2026 The Wayplan Authors
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

#include "wayplan/nl_bridge.hpp"

#include <array>
#include <chrono>
#include <functional>
#include <set>

#include <fmt/format.h>

#include "json.hpp"
#include "wayplan/error.hpp"

namespace wayplan {
namespace {

// ---------------------------------------------------------------------------
// Typed slots.

enum class Slot { kMoney, kTime, kDate, kAirport, kOrdinal, kList, kRating, kCabin };

struct Value {
  Cents money;
  int number = 0;  // minutes for kTime, 0-based leg for kOrdinal
  Date date;
  std::string text;
  std::vector<std::string> list;
  Rating rating;
  CabinClass cabin = CabinClass::kCoach;
};

constexpr std::array<std::string_view, 12> kMonths = {
    "January", "February", "March",     "April",   "May",      "June",
    "July",    "August",   "September", "October", "November", "December"};
constexpr std::array<std::string_view, 3> kOrdinals = {"first", "second", "third"};
constexpr std::array<std::string_view, 4> kCabins = {"coach", "premium", "business", "first"};

bool IsDigit(char c) { return c >= '0' && c <= '9'; }

// Reads 1..max_digits decimal digits.
std::size_t ReadDigits(std::string_view s, std::size_t pos, std::size_t max_digits, int* out) {
  std::size_t n = 0;
  int v = 0;
  while (pos + n < s.size() && n < max_digits && IsDigit(s[pos + n])) {
    v = v * 10 + (s[pos + n] - '0');
    ++n;
  }
  *out = v;
  return n;
}

std::optional<std::size_t> ParseTimeSlot(std::string_view s, int* minutes) {
  if (s.starts_with("midnight")) {
    *minutes = kMinutesPerDay;
    return 8;
  }
  int hour = 0;
  int minute = 0;
  const std::size_t h = ReadDigits(s, 0, 2, &hour);
  if (h == 0 || hour < 1 || hour > 12 || h >= s.size() || s[h] != ':') return std::nullopt;
  if (ReadDigits(s, h + 1, 2, &minute) != 2 || minute > 59) return std::nullopt;
  const std::string_view rest = s.substr(h + 3);
  int base = 0;
  if (rest.starts_with(" AM")) {
    base = hour == 12 ? 0 : hour * 60;
  } else if (rest.starts_with(" PM")) {
    base = hour == 12 ? 12 * 60 : (hour + 12) * 60;
  } else {
    return std::nullopt;
  }
  *minutes = base + minute;
  return h + 6;
}

std::string_view DaySuffix(int d) {
  if (d % 100 >= 11 && d % 100 <= 13) return "th";
  if (d % 10 == 1) return "st";
  if (d % 10 == 2) return "nd";
  if (d % 10 == 3) return "rd";
  return "th";
}

std::optional<std::size_t> ParseDateSlot(std::string_view s, Date* date) {
  for (std::size_t m = 0; m < kMonths.size(); ++m) {
    if (!s.starts_with(kMonths[m]) || s.size() <= kMonths[m].size() ||
        s[kMonths[m].size()] != ' ') {
      continue;
    }
    std::size_t pos = kMonths[m].size() + 1;
    int day = 0;
    const std::size_t d = ReadDigits(s, pos, 2, &day);
    if (d == 0) return std::nullopt;
    pos += d;
    const std::string_view suffix = s.substr(pos, 2);
    if (suffix != DaySuffix(day)) return std::nullopt;
    pos += 2;
    if (s.substr(pos, 2) != ", ") return std::nullopt;
    pos += 2;
    int year = 0;
    if (ReadDigits(s, pos, 4, &year) != 4) return std::nullopt;
    pos += 4;
    const std::chrono::year_month_day ymd{std::chrono::year(year),
                                          std::chrono::month(static_cast<unsigned>(m + 1)),
                                          std::chrono::day(static_cast<unsigned>(day))};
    if (!ymd.ok()) return std::nullopt;
    *date = Date::FromYmd(year, static_cast<unsigned>(m + 1), static_cast<unsigned>(day));
    return pos;
  }
  return std::nullopt;
}

std::optional<std::size_t> ParseListSlot(std::string_view s, std::vector<std::string>* items) {
  std::size_t pos = 0;
  items->clear();
  while (true) {
    if (pos >= s.size() || s[pos] != '"') return std::nullopt;
    const std::size_t close = s.find('"', pos + 1);
    if (close == std::string_view::npos || close == pos + 1) return std::nullopt;
    items->emplace_back(s.substr(pos + 1, close - pos - 1));
    pos = close + 1;
    if (s.substr(pos, 5) == " or \"") {
      pos += 4;
      continue;
    }
    return pos;
  }
}

std::optional<std::size_t> ParseSlot(Slot slot, std::string_view s, Value* v) {
  switch (slot) {
    case Slot::kMoney: {
      auto parsed = ParseDollarPrefix(s);
      if (!parsed) return std::nullopt;
      v->money = parsed->first;
      return parsed->second;
    }
    case Slot::kTime:
      return ParseTimeSlot(s, &v->number);
    case Slot::kDate:
      return ParseDateSlot(s, &v->date);
    case Slot::kAirport: {
      if (s.size() < 3) return std::nullopt;
      for (int i = 0; i < 3; ++i) {
        if (s[i] < 'A' || s[i] > 'Z') return std::nullopt;
      }
      if (s.size() > 3 && std::isalnum(static_cast<unsigned char>(s[3]))) return std::nullopt;
      v->text = std::string(s.substr(0, 3));
      return 3;
    }
    case Slot::kOrdinal:
      for (std::size_t i = 0; i < kOrdinals.size(); ++i) {
        if (s.starts_with(kOrdinals[i])) {
          v->number = static_cast<int>(i);
          return kOrdinals[i].size();
        }
      }
      return std::nullopt;
    case Slot::kList:
      return ParseListSlot(s, &v->list);
    case Slot::kRating: {
      int whole = 0;
      std::size_t n = ReadDigits(s, 0, 1, &whole);
      if (n == 0) return std::nullopt;
      int tenths = whole * 10;
      if (n + 1 < s.size() && s[n] == '.' && IsDigit(s[n + 1])) {
        tenths += s[n + 1] - '0';
        n += 2;
      }
      v->rating = Rating(tenths);
      if (!v->rating.IsValid()) return std::nullopt;
      return n;
    }
    case Slot::kCabin:
      for (std::size_t i = 0; i < kCabins.size(); ++i) {
        if (s.starts_with(kCabins[i])) {
          v->cabin = static_cast<CabinClass>(i);
          return kCabins[i].size();
        }
      }
      return std::nullopt;
  }
  return std::nullopt;
}

std::string RenderSlot(Slot slot, const Value& v) {
  switch (slot) {
    case Slot::kMoney: return v.money.ToDollarString();
    case Slot::kTime: return FormatClock(v.number);
    case Slot::kDate: return FormatLongDate(v.date);
    case Slot::kAirport: return v.text;
    case Slot::kOrdinal: return std::string(kOrdinals.at(v.number));
    case Slot::kList: {
      std::string out;
      for (std::size_t i = 0; i < v.list.size(); ++i) {
        if (i > 0) out += " or ";
        out += "\"" + v.list[i] + "\"";
      }
      return out;
    }
    case Slot::kRating: return v.rating.ToString();
    case Slot::kCabin: return std::string(CabinClassName(v.cabin));
  }
  return {};
}

// ---------------------------------------------------------------------------
// Templates: literal text with {money}, {time}, {date}, {airport},
// {ordinal}, {list}, {rating} and {cabin} slots.

class Template {
 public:
  explicit Template(std::string_view pattern) {
    std::string literal;
    std::size_t i = 0;
    while (i < pattern.size()) {
      if (pattern[i] == '{') {
        const std::size_t close = pattern.find('}', i);
        const std::string_view name = pattern.substr(i + 1, close - i - 1);
        pieces_.push_back(Piece{std::move(literal), SlotNamed(name)});
        literal.clear();
        i = close + 1;
      } else {
        literal.push_back(pattern[i++]);
      }
    }
    pieces_.push_back(Piece{std::move(literal), std::nullopt});
  }

  std::string Render(const std::vector<Value>& values) const {
    std::string out;
    std::size_t next = 0;
    for (const Piece& p : pieces_) {
      out += p.literal;
      if (p.slot) out += RenderSlot(*p.slot, values.at(next++));
    }
    return out;
  }

  // Matches a prefix of `text`; returns the consumed length.
  std::optional<std::size_t> MatchPrefix(std::string_view text, std::vector<Value>* values) const {
    values->clear();
    std::size_t pos = 0;
    for (const Piece& p : pieces_) {
      if (text.substr(pos, p.literal.size()) != p.literal) return std::nullopt;
      pos += p.literal.size();
      if (!p.slot) continue;
      Value v;
      auto used = ParseSlot(*p.slot, text.substr(pos), &v);
      if (!used) return std::nullopt;
      pos += *used;
      values->push_back(std::move(v));
    }
    return pos;
  }

  bool Match(std::string_view text, std::vector<Value>* values) const {
    auto used = MatchPrefix(text, values);
    return used && *used == text.size();
  }

 private:
  struct Piece {
    std::string literal;  // precedes the slot
    std::optional<Slot> slot;
  };

  static Slot SlotNamed(std::string_view name) {
    static const std::pair<std::string_view, Slot> kNames[] = {
        {"money", Slot::kMoney},     {"time", Slot::kTime}, {"date", Slot::kDate},
        {"airport", Slot::kAirport}, {"ordinal", Slot::kOrdinal}, {"list", Slot::kList},
        {"rating", Slot::kRating},   {"cabin", Slot::kCabin}};
    for (const auto& [n, s] : kNames) {
      if (n == name) return s;
    }
    throw std::logic_error("unknown template slot");
  }

  std::vector<Piece> pieces_;
};

using Variants = std::array<Template, kParaphraseVariants>;

Variants MakeVariants(std::string_view a, std::string_view b, std::string_view c,
                      std::string_view d) {
  return {Template(a), Template(b), Template(c), Template(d)};
}

// ---------------------------------------------------------------------------
// Clause grammar.

enum class Family { kAirline, kHotel, kBudget };

// A clause kind: its variant templates, the field slot it occupies for
// variant selection, and how parsed values land in the request. `fields`
// names what it sets, for duplicate detection.
struct ClauseKind {
  Family family;
  int field_index;
  Variants variants;
  std::function<std::vector<std::string>(SymbolicRequest&, const std::vector<Value>&)> apply;
};

Value MoneyValue(Cents c) {
  Value v;
  v.money = c;
  return v;
}

Value ListValue(const std::vector<std::string>& items) {
  Value v;
  v.list = items;
  return v;
}

// Field indices fix both clause order and the per-clause variant mix.
enum FieldIndex {
  kLegsField = 0,
  kCabinField,
  kRefundableField,
  kNonstopField,
  kBasicField,
  kMixedField,
  kRedEyeField,
  kDepartureField,
  kArrivalField,
  kPlaneField,
  kAirlinesField,
  kFlightBudgetField,
  kHotelDailyField,
  kHotelTotalField,
  kRatingField,
  kBrandsField,
  kTripBudgetField,
  kEverydayField,
  kAirlineHeaderField,
  kHotelHeaderField,
  kBudgetHeaderField,
  kIntroField,
  kOutroField,
  kOrderField,
};

int VariantOf(std::uint64_t seed, int field) {
  return static_cast<int>((seed + (seed / kParaphraseVariants) * field) % kParaphraseVariants);
}

struct Grammar {
  // Boolean flags: index 0 renders true, index 1 renders false.
  struct Flag {
    int field;
    std::optional<bool> AirlineConstraints::*member;
    const char* name;
    Variants when_true;
    Variants when_false;
  };

  std::vector<Flag> flags;
  Variants cabin = MakeVariants("{cabin} class", "in {cabin} class", "a {cabin} class seat",
                                "{cabin} cabin");
  Variants basic_and_mixed =
      MakeVariants("no basic economy or mixed cabin", "avoid basic economy and mixed cabin",
                   "neither basic economy nor mixed cabin",
                   "nothing in basic economy or a mixed cabin");
  Variants departure = MakeVariants(
      "departing between {time} and {time} on the {ordinal} flight",
      "{ordinal} flight leaving between {time} and {time}",
      "departure from {time} to {time} for the {ordinal} flight",
      "leave between {time} and {time} on the {ordinal} leg");
  Variants arrival = MakeVariants(
      "arriving between {time} and {time} on the {ordinal} flight",
      "{ordinal} flight landing between {time} and {time}",
      "arrival from {time} to {time} for the {ordinal} flight",
      "land between {time} and {time} on the {ordinal} leg");
  Variants planes = MakeVariants("on a {list} aircraft", "aircraft type {list}",
                                 "flying on {list} planes", "plane model {list}");
  Variants airlines = MakeVariants("with {list}", "airline {list}", "flying {list}",
                                   "preferably on {list}");
  Variants flight_budget =
      MakeVariants("with a total budget of {money}", "total flight budget {money}",
                   "flights under {money} in total", "spending at most {money} on flights");
  Variants hotel_daily = MakeVariants("daily budget {money}", "at most {money} per night",
                                      "nightly rate under {money}", "no more than {money} a night");
  Variants hotel_total =
      MakeVariants("total budget {money}", "at most {money} for all nights",
                   "hotel total under {money}", "no more than {money} across all stays");
  Variants rating = MakeVariants("rated at least {rating} stars", "minimum rating {rating}",
                                 "{rating} stars or better", "a rating of {rating} or higher");
  Variants brands = MakeVariants("brand {list}", "from {list}", "staying with {list}",
                                 "brands {list}");
  Variants trip_budget =
      MakeVariants("total trip budget {money}", "everything under {money}",
                   "overall spend at most {money}", "no more than {money} in total");
  Variants everyday = MakeVariants("everyday budget {money}", "at most {money} per day",
                                   "daily spending under {money}", "no more than {money} each day");

  std::array<std::string_view, 4> airline_header = {"Flights: ", "For the flights: ",
                                                    "Airline requirements: ",
                                                    "On the flight side, I want "};
  std::array<std::string_view, 4> hotel_header = {"Hotels: ", "For the hotels: ",
                                                  "Hotel requirements: ", "For lodging, I want "};
  std::array<std::string_view, 4> budget_header = {"Budget: ", "Overall budget: ",
                                                   "Trip budget: ",
                                                   "Across the whole trip, I want "};
  std::array<std::string_view, 4> separator = {", ", "; ", ", ", ", "};

  struct LegsForm {
    std::string_view prefix;
    Template item;
    std::string_view sep;
    std::string_view last_sep;
  };
  std::vector<LegsForm> legs;

  std::array<std::string_view, 4> intro = {
      "Embark on a thrilling journey with these requirements.", "Please plan a trip for me.",
      "I need help booking travel.", "Here is what I am looking for."};
  std::array<std::string_view, 4> outro = {"The adventure awaits!", "Thanks in advance.",
                                           "Looking forward to the options.",
                                           "Let me know what you find."};
  std::array<std::string_view, 4> round_trip = {"This is a round trip", "It is a round trip",
                                                "I need a round trip", "Round trip, please"};
  std::array<std::string_view, 4> one_way = {"This is a one-way trip", "It is a one-way trip",
                                             "I need a one-way trip", "One way, please"};

  Grammar() {
    using A = AirlineConstraints;
    flags.push_back({kRefundableField, &A::refundable, "airline.refundable",
                     MakeVariants("refundable", "a refundable fare", "refundable tickets only",
                                  "tickets must be refundable"),
                     MakeVariants("non-refundable is fine", "refundability not required",
                                  "no need for refundable tickets",
                                  "tickets need not be refundable")});
    flags.push_back({kNonstopField, &A::nonstop_only, "airline.nonstop_only",
                     MakeVariants("non-stop", "non-stop flights only", "no connections",
                                  "direct flights only"),
                     MakeVariants("connections are fine", "stops are okay",
                                  "connecting flights allowed", "layovers are acceptable")});
    flags.push_back({kBasicField, &A::must_not_basic_economy, "airline.must_not_basic_economy",
                     MakeVariants("no basic economy", "avoid basic economy",
                                  "basic economy is not acceptable", "nothing in basic economy"),
                     MakeVariants("basic economy is fine", "basic economy is okay",
                                  "basic economy allowed", "basic economy is acceptable")});
    flags.push_back({kMixedField, &A::no_mixed_cabin, "airline.no_mixed_cabin",
                     MakeVariants("no mixed cabin", "avoid mixed cabin",
                                  "mixed cabin is not acceptable", "nothing with a mixed cabin"),
                     MakeVariants("mixed cabin is fine", "mixed cabin is okay",
                                  "mixed cabin allowed", "mixed cabin is acceptable")});
    flags.push_back({kRedEyeField, &A::avoid_red_eye, "airline.avoid_red_eye",
                     MakeVariants("no red-eye flights", "avoid red-eyes",
                                  "no overnight red-eye departures",
                                  "red-eye flights are not acceptable"),
                     MakeVariants("red-eye flights are fine", "red-eyes are okay",
                                  "red-eye departures allowed", "red-eye flights are acceptable")});
    legs.push_back({"Travel dates: ", Template("{date}, {airport} to {airport}"), ", ", ", and "});
    legs.push_back({"I fly ", Template("from {airport} to {airport} on {date}"), ", then ",
                    ", then "});
    legs.push_back({"Itinerary: ", Template("{airport} to {airport} on {date}"), "; ", "; "});
    legs.push_back({"My trip: leave ", Template("{airport} for {airport} on {date}"), ", then ",
                    ", and finally "});
  }
};

const Grammar& G() {
  static const Grammar kGrammar;
  return kGrammar;
}

// ---------------------------------------------------------------------------
// Rendering.

struct RenderedClause {
  std::string text;
};

std::string JoinClauses(std::string_view header, std::string_view sep,
                        const std::vector<std::string>& clauses) {
  std::string out(header);
  for (std::size_t i = 0; i < clauses.size(); ++i) {
    if (i > 0) out += sep;
    out += clauses[i];
  }
  return out + ".";
}

Value WindowValue(int minutes) {
  Value v;
  v.number = minutes;
  return v;
}

Value OrdinalValue(int leg) {
  Value v;
  v.number = leg;
  return v;
}

// Window templates put the ordinal first in variant 1 only.
std::vector<Value> WindowValues(const LegWindow& w, int variant) {
  if (variant == 1) return {OrdinalValue(w.leg), WindowValue(w.window.start), WindowValue(w.window.end)};
  return {WindowValue(w.window.start), WindowValue(w.window.end), OrdinalValue(w.leg)};
}

std::vector<std::string> AirlineClauses(const AirlineConstraints& a, std::uint64_t seed) {
  const Grammar& g = G();
  std::vector<std::string> out;
  auto variant = [&](int field) { return VariantOf(seed, field); };
  if (a.cabin_class) {
    Value v;
    v.cabin = *a.cabin_class;
    out.push_back(g.cabin[variant(kCabinField)].Render({v}));
  }
  const bool combined = a.must_not_basic_economy == true && a.no_mixed_cabin == true;
  for (const Grammar::Flag& f : g.flags) {
    const std::optional<bool>& value = a.*f.member;
    if (!value) continue;
    if (combined && f.field == kMixedField) continue;
    if (combined && f.field == kBasicField) {
      out.push_back(g.basic_and_mixed[variant(kBasicField)].Render({}));
      continue;
    }
    const Variants& forms = *value ? f.when_true : f.when_false;
    out.push_back(forms[variant(f.field)].Render({}));
  }
  if (a.departure_time) {
    const int v = variant(kDepartureField);
    for (const LegWindow& w : *a.departure_time) out.push_back(g.departure[v].Render(WindowValues(w, v)));
  }
  if (a.arrival_time) {
    const int v = variant(kArrivalField);
    for (const LegWindow& w : *a.arrival_time) out.push_back(g.arrival[v].Render(WindowValues(w, v)));
  }
  if (a.plane_types) out.push_back(g.planes[variant(kPlaneField)].Render({ListValue(*a.plane_types)}));
  if (a.preferred_airlines) {
    out.push_back(g.airlines[variant(kAirlinesField)].Render({ListValue(*a.preferred_airlines)}));
  }
  if (a.price_total_max) {
    out.push_back(g.flight_budget[variant(kFlightBudgetField)].Render({MoneyValue(*a.price_total_max)}));
  }
  return out;
}

std::vector<std::string> HotelClauses(const HotelConstraints& h, std::uint64_t seed) {
  const Grammar& g = G();
  std::vector<std::string> out;
  if (h.daily_budget_max) {
    out.push_back(g.hotel_daily[VariantOf(seed, kHotelDailyField)].Render({MoneyValue(*h.daily_budget_max)}));
  }
  if (h.total_budget_max) {
    out.push_back(g.hotel_total[VariantOf(seed, kHotelTotalField)].Render({MoneyValue(*h.total_budget_max)}));
  }
  if (h.min_rating) {
    Value v;
    v.rating = *h.min_rating;
    out.push_back(g.rating[VariantOf(seed, kRatingField)].Render({v}));
  }
  if (h.brands) out.push_back(g.brands[VariantOf(seed, kBrandsField)].Render({ListValue(*h.brands)}));
  return out;
}

std::vector<std::string> BudgetClauses(const BudgetConstraints& b, std::uint64_t seed) {
  const Grammar& g = G();
  std::vector<std::string> out;
  if (b.total_budget) {
    out.push_back(g.trip_budget[VariantOf(seed, kTripBudgetField)].Render({MoneyValue(*b.total_budget)}));
  }
  if (b.everyday_budget) {
    out.push_back(g.everyday[VariantOf(seed, kEverydayField)].Render({MoneyValue(*b.everyday_budget)}));
  }
  return out;
}

std::string LegsSentence(const std::vector<TripLeg>& legs, int variant) {
  const Grammar::LegsForm& form = G().legs[variant];
  std::string out(form.prefix);
  for (std::size_t k = 0; k < legs.size(); ++k) {
    if (k > 0) out += (k + 1 == legs.size()) ? form.last_sep : form.sep;
    Value date;
    date.date = legs[k].date;
    Value from;
    from.text = legs[k].origin;
    Value to;
    to.text = legs[k].destination;
    out += variant == 0 ? form.item.Render({date, from, to}) : form.item.Render({from, to, date});
  }
  return out + ".";
}

// ---------------------------------------------------------------------------
// Parsing.

struct Segment {
  std::string_view text;  // without the terminator
  std::size_t begin = 0;
};

[[noreturn]] void Unparsable(std::string_view what, std::size_t begin, std::size_t end) {
  throw Error(ErrorCode::kUnparsableSegment, fmt::format("cannot parse {}", what), "",
              TextSpan{begin, end});
}

// Splits on '.', '!' or '?' followed by whitespace or the end, outside quotes.
std::vector<Segment> SplitSentences(std::string_view text) {
  std::vector<Segment> out;
  std::size_t start = 0;
  bool quoted = false;
  auto emit = [&](std::size_t end) {
    std::size_t b = start;
    while (b < end && std::isspace(static_cast<unsigned char>(text[b]))) ++b;
    std::size_t e = end;
    while (e > b && std::isspace(static_cast<unsigned char>(text[e - 1]))) --e;
    if (e > b) out.push_back(Segment{text.substr(b, e - b), b});
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '"') quoted = !quoted;
    if (quoted || (c != '.' && c != '!' && c != '?')) continue;
    if (i + 1 == text.size() || std::isspace(static_cast<unsigned char>(text[i + 1]))) {
      emit(i);
      start = i + 1;
    }
  }
  emit(text.size());
  return out;
}

// Splits a clause list on `sep` outside quotes.
std::vector<Segment> SplitClauses(std::string_view body, std::size_t offset, std::string_view sep) {
  std::vector<Segment> out;
  std::size_t start = 0;
  bool quoted = false;
  for (std::size_t i = 0; i < body.size(); ++i) {
    if (body[i] == '"') quoted = !quoted;
    if (!quoted && body.substr(i, sep.size()) == sep) {
      out.push_back(Segment{body.substr(start, i - start), offset + start});
      start = i + sep.size();
      i = start - 1;
    }
  }
  out.push_back(Segment{body.substr(start), offset + start});
  return out;
}

class Parser {
 public:
  SymbolicRequest Run(std::string_view text) {
    for (const Segment& s : SplitSentences(text)) Sentence(s);
    if (!have_legs_) {
      throw Error(ErrorCode::kMissingLegs, "no travel dates found in the request", "legs");
    }
    const TripKind inferred = r_.legs.size() == 1 ? TripKind::kOneWay : TripKind::kRoundTrip;
    r_.trip_kind = stated_kind_.value_or(inferred);
    r_ = Canonicalize(std::move(r_));
    ValidateRequest(r_);
    return r_;
  }

 private:
  void Sentence(const Segment& s) {
    const Grammar& g = G();
    auto strip = [](std::string_view f) { return f.substr(0, f.size() - 1); };
    for (int v = 0; v < kParaphraseVariants; ++v) {
      if (s.text == strip(g.intro[v]) || s.text == strip(g.outro[v])) return;
      if (s.text == g.round_trip[v] || s.text == g.one_way[v]) {
        stated_kind_ = s.text == g.round_trip[v] ? TripKind::kRoundTrip : TripKind::kOneWay;
        return;
      }
    }
    for (int v = 0; v < kParaphraseVariants; ++v) {
      if (TryLegs(s, g.legs[v], v == 0)) return;
    }
    for (int v = 0; v < kParaphraseVariants; ++v) {
      for (const auto& [header, family] :
           {std::pair{g.airline_header[v], Family::kAirline},
            std::pair{g.hotel_header[v], Family::kHotel},
            std::pair{g.budget_header[v], Family::kBudget}}) {
        if (!s.text.starts_with(header)) continue;
        const std::string_view body = s.text.substr(header.size());
        for (const Segment& c : SplitClauses(body, s.begin + header.size(), g.separator[v])) {
          Clause(family, c);
        }
        return;
      }
    }
    Unparsable(fmt::format("sentence \"{}\"", s.text), s.begin, s.begin + s.text.size());
  }

  bool TryLegs(const Segment& s, const Grammar::LegsForm& form, bool date_first) {
    if (!s.text.starts_with(form.prefix)) return false;
    std::string_view rest = s.text.substr(form.prefix.size());
    std::vector<TripLeg> legs;
    std::vector<Value> values;
    while (true) {
      auto used = form.item.MatchPrefix(rest, &values);
      if (!used) {
        const std::size_t at = s.begin + (s.text.size() - rest.size());
        Unparsable("travel leg", at, s.begin + s.text.size());
      }
      TripLeg leg;
      leg.date = date_first ? values[0].date : values[2].date;
      leg.origin = date_first ? values[1].text : values[0].text;
      leg.destination = date_first ? values[2].text : values[1].text;
      legs.push_back(std::move(leg));
      rest.remove_prefix(*used);
      if (rest.empty()) break;
      if (rest.starts_with(form.last_sep)) {
        rest.remove_prefix(form.last_sep.size());
      } else if (rest.starts_with(form.sep)) {
        rest.remove_prefix(form.sep.size());
      } else {
        const std::size_t at = s.begin + (s.text.size() - rest.size());
        Unparsable("text after travel legs", at, s.begin + s.text.size());
      }
    }
    if (have_legs_) Unparsable("second travel-dates sentence", s.begin, s.begin + s.text.size());
    have_legs_ = true;
    r_.legs = std::move(legs);
    return true;
  }

  void Claim(const std::string& field, const Segment& c) {
    if (!claimed_.insert(field).second) {
      Unparsable(fmt::format("repeated constraint {}", field), c.begin, c.begin + c.text.size());
    }
  }

  bool TryMoney(const Variants& forms, const Segment& c, std::optional<Cents>* out,
                const char* field) {
    std::vector<Value> values;
    for (const Template& t : forms) {
      if (t.Match(c.text, &values)) {
        Claim(field, c);
        *out = values[0].money;
        return true;
      }
    }
    return false;
  }

  bool TryList(const Variants& forms, const Segment& c,
               std::optional<std::vector<std::string>>* out, const char* field) {
    std::vector<Value> values;
    for (const Template& t : forms) {
      if (t.Match(c.text, &values)) {
        Claim(field, c);
        *out = values[0].list;
        return true;
      }
    }
    return false;
  }

  bool TryWindow(const Variants& forms, const Segment& c,
                 std::optional<std::vector<LegWindow>>* out, const char* field) {
    std::vector<Value> values;
    for (int v = 0; v < kParaphraseVariants; ++v) {
      if (!forms[v].Match(c.text, &values)) continue;
      LegWindow w;
      if (v == 1) {
        w.leg = values[0].number;
        w.window = TimeWindow{values[1].number, values[2].number};
      } else {
        w.leg = values[2].number;
        w.window = TimeWindow{values[0].number, values[1].number};
      }
      Claim(fmt::format("{}[{}]", field, w.leg), c);
      if (!*out) *out = std::vector<LegWindow>{};
      (*out)->push_back(w);
      return true;
    }
    return false;
  }

  void Clause(Family family, const Segment& c) {
    const Grammar& g = G();
    std::vector<Value> values;
    if (family == Family::kAirline) {
      AirlineConstraints& a = r_.airline;
      for (const Template& t : g.cabin) {
        if (t.Match(c.text, &values)) {
          Claim("airline.cabin_class", c);
          a.cabin_class = values[0].cabin;
          return;
        }
      }
      for (const Template& t : g.basic_and_mixed) {
        if (t.Match(c.text, &values)) {
          Claim("airline.must_not_basic_economy", c);
          Claim("airline.no_mixed_cabin", c);
          a.must_not_basic_economy = true;
          a.no_mixed_cabin = true;
          return;
        }
      }
      for (const Grammar::Flag& f : g.flags) {
        for (bool value : {true, false}) {
          for (const Template& t : value ? f.when_true : f.when_false) {
            if (t.Match(c.text, &values)) {
              Claim(f.name, c);
              a.*f.member = value;
              return;
            }
          }
        }
      }
      if (TryWindow(g.departure, c, &a.departure_time, "airline.departure_time")) return;
      if (TryWindow(g.arrival, c, &a.arrival_time, "airline.arrival_time")) return;
      if (TryList(g.planes, c, &a.plane_types, "airline.plane_types")) return;
      if (TryList(g.airlines, c, &a.preferred_airlines, "airline.preferred_airlines")) return;
      if (TryMoney(g.flight_budget, c, &a.price_total_max, "airline.price_total_max")) return;
    } else if (family == Family::kHotel) {
      HotelConstraints& h = r_.hotel;
      if (TryMoney(g.hotel_daily, c, &h.daily_budget_max, "hotel.daily_budget_max")) return;
      if (TryMoney(g.hotel_total, c, &h.total_budget_max, "hotel.total_budget_max")) return;
      for (const Template& t : g.rating) {
        if (t.Match(c.text, &values)) {
          Claim("hotel.min_rating", c);
          h.min_rating = values[0].rating;
          return;
        }
      }
      if (TryList(g.brands, c, &h.brands, "hotel.brands")) return;
    } else {
      BudgetConstraints& b = r_.budget;
      if (TryMoney(g.trip_budget, c, &b.total_budget, "budget.total_budget")) return;
      if (TryMoney(g.everyday, c, &b.everyday_budget, "budget.everyday_budget")) return;
    }
    Unparsable(fmt::format("clause \"{}\"", c.text), c.begin, c.begin + c.text.size());
  }

  SymbolicRequest r_;
  bool have_legs_ = false;
  std::optional<TripKind> stated_kind_;
  std::set<std::string> claimed_;
};

}  // namespace

std::string FormatLongDate(Date date) {
  const unsigned d = date.day();
  return fmt::format("{} {}{}, {}", kMonths[date.month() - 1], d, DaySuffix(static_cast<int>(d)),
                     date.year());
}

std::string FormatClock(int minute_of_day) {
  if (minute_of_day == kMinutesPerDay) return "midnight";
  const int hour = minute_of_day / 60;
  const int minute = minute_of_day % 60;
  const int h12 = hour % 12 == 0 ? 12 : hour % 12;
  return fmt::format("{}:{:02} {}", h12, minute, hour < 12 ? "AM" : "PM");
}

std::optional<int> ParseClock(std::string_view text) {
  int minutes = 0;
  auto used = ParseTimeSlot(text, &minutes);
  if (!used || *used != text.size()) return std::nullopt;
  return minutes;
}

std::optional<Date> ParseLongDate(std::string_view text) {
  Date date;
  auto used = ParseDateSlot(text, &date);
  if (!used || *used != text.size()) return std::nullopt;
  return date;
}

std::string RenderNl(const SymbolicRequest& r, std::uint64_t seed) {
  const Grammar& g = G();
  const std::vector<std::string> airline = AirlineClauses(r.airline, seed);
  const std::vector<std::string> hotel = HotelClauses(r.hotel, seed);
  const std::vector<std::string> budget = BudgetClauses(r.budget, seed);
  const bool any = !airline.empty() || !hotel.empty() || !budget.empty();

  std::vector<std::string> parts(4);
  if (!airline.empty()) {
    const int v = VariantOf(seed, kAirlineHeaderField);
    parts[0] = JoinClauses(g.airline_header[v], g.separator[v], airline);
  }
  if (!hotel.empty()) {
    const int v = VariantOf(seed, kHotelHeaderField);
    parts[1] = JoinClauses(g.hotel_header[v], g.separator[v], hotel);
  }
  if (!budget.empty()) {
    const int v = VariantOf(seed, kBudgetHeaderField);
    parts[2] = JoinClauses(g.budget_header[v], g.separator[v], budget);
  }
  parts[3] = LegsSentence(r.legs, VariantOf(seed, kLegsField));

  static constexpr std::array<std::array<int, 4>, 4> kOrders = {
      {{0, 1, 2, 3}, {3, 0, 1, 2}, {3, 1, 0, 2}, {2, 3, 0, 1}}};
  std::vector<std::string> sentences;
  if (any) sentences.emplace_back(g.intro[VariantOf(seed, kIntroField)]);
  for (int i : kOrders[VariantOf(seed, kOrderField)]) {
    if (!parts[i].empty()) sentences.push_back(parts[i]);
  }
  if (any) sentences.emplace_back(g.outro[VariantOf(seed, kOutroField)]);
  std::string out;
  for (const std::string& s : sentences) {
    if (!out.empty()) out += ' ';
    out += s;
  }
  return out;
}

SymbolicRequest ParseNl(std::string_view text) { return Parser().Run(text); }

void ValidateBackend(const TranslatorBackend& backend) {
  if (backend.kind != TranslatorBackend::Kind::kExternalEndpoint) return;
  const ExternalEndpoint& e = backend.endpoint;
  if (e.url.empty()) throw Error(ErrorCode::kInvalidArgument, "endpoint url is empty", "url");
  if (e.timeout_ms <= 0) throw Error(ErrorCode::kInvalidArgument, "timeout must be > 0", "timeout_ms");
  if (e.max_retries < 0) {
    throw Error(ErrorCode::kInvalidArgument, "max_retries must be >= 0", "max_retries");
  }
}

std::string TranslatorRequestBody(const ExternalEndpoint& endpoint, std::string_view text) {
  nlohmann::ordered_json body;
  body["model"] = endpoint.model;
  body["system_prompt"] = endpoint.system_prompt;
  body["user_text"] = std::string(text);
  return body.dump();
}

Translation Translate(std::string_view text, const TranslatorBackend& backend,
                      Transport* transport) {
  ValidateBackend(backend);
  Translation out;
  if (backend.kind == TranslatorBackend::Kind::kTemplateParser) {
    out.request = ParseNl(text);
    out.raw_output = SerializeRequest(out.request);
    return out;
  }
  std::unique_ptr<Transport> owned;
  if (transport == nullptr) {
    owned = MakeHttpTransport();
    transport = owned.get();
  }
  const std::string body = TranslatorRequestBody(backend.endpoint, text);
  std::string last_problem;
  for (int attempt = 0; attempt <= backend.endpoint.max_retries; ++attempt) {
    out.attempts = attempt + 1;
    out.raw_output = transport->Post(backend.endpoint, body);
    try {
      out.request = ParseRequest(out.raw_output);
      return out;
    } catch (const Error& e) {
      if (attempt == 0) out.valid_json = false;
      last_problem = e.what();
    }
  }
  throw Error(ErrorCode::kInvalidOutputAfterRetries,
              fmt::format("translator output invalid after {} attempts: {}", out.attempts,
                          last_problem));
}

}  // namespace wayplan
