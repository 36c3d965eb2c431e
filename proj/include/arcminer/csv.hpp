#pragma once

#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace arcminer::csv {

using Row = std::vector<std::string>;

// RFC 4180 reader: quoted fields may contain commas, doubled quotes and
// newlines. Tracks the physical line where each record starts.
class Reader {
public:
  explicit Reader(std::istream& in) : in_(in) {}

  std::optional<Row> next();
  std::size_t line() const noexcept { return record_line_; }

private:
  std::istream& in_;
  std::size_t line_ = 1;
  std::size_t record_line_ = 0;
};

std::string escape(std::string_view field);
std::string join(const Row& fields);

// Fixed six-decimal formatting used by every CSV output; never emits "-0.000000".
std::string format_fixed(double value, int decimals = 6);

} // namespace arcminer::csv
