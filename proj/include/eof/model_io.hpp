#pragma once

// Flat text model format, one record per line:
//
//   eof-model v1
//   task reg|clf
//   lambda <real>
//   map eof|rks|orf|lkrf|eerf
//   -- eof:  kernel <name>, omega, dim, scale, features <M>, then M lines "l_1..l_D i_1..i_D"
//   -- rf:   sigma, seed, pool <M0>, dim, features <M>, then M lines "gamma_1..gamma_D b"
//   scaler none | scaler <D> followed by x_min, x_max lines and "y <task> <lo> <hi>"
//   weights <M>, then one weight per line
//   end

#include "eof/data.hpp"
#include "eof/learn.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>

namespace eof {

struct SavedModel {
    Model model;
    std::optional<Scaler> scaler;
};

// Throws InvalidData for models without a feature map or with a custom kernel.
void write_model(std::ostream& out, const SavedModel& saved);
void save_model(const std::filesystem::path& path, const SavedModel& saved);

// Throws ParseError (row = line number) on malformed input.
[[nodiscard]] SavedModel read_model(std::istream& in);
[[nodiscard]] SavedModel load_model(const std::filesystem::path& path);

}  // namespace eof
