#pragma once

#include <cstdio>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace rqbm {

// Formats a double with %.17g so the CSV round-trips bit-faithfully.
inline std::string csv_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Minimal CSV emitter: header row once, then numeric rows.
class CsvWriter {
  public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
        : f_(std::fopen(path.string().c_str(), "w")) {
        if (!f_) throw std::runtime_error("cannot open " + path.string() + " for writing");
        for (std::size_t i = 0; i < header.size(); ++i)
            std::fprintf(f_, "%s%s", i ? "," : "", header[i].c_str());
        std::fputc('\n', f_);
    }

    CsvWriter(const CsvWriter&) = delete;
    CsvWriter& operator=(const CsvWriter&) = delete;

    ~CsvWriter() {
        if (f_) std::fclose(f_);
    }

    void row(const std::vector<double>& values) {
        for (std::size_t i = 0; i < values.size(); ++i)
            std::fprintf(f_, "%s%s", i ? "," : "", csv_number(values[i]).c_str());
        std::fputc('\n', f_);
    }

  private:
    std::FILE* f_;
};

}  // namespace rqbm
