#ifndef GRWC_DATA_IO_HPP
#define GRWC_DATA_IO_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "grwc/net.hpp"

namespace grwc {

// wrong magic number
class IdxFormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// truncated or oversized payload relative to the header
class IdxLengthError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// image/label files disagree, or a label byte is out of range
class DataConsistencyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// IDX image container: big-endian 32-bit header fields (magic 2051, count,
// rows, cols) followed by count*rows*cols unsigned bytes.
struct IdxImages {
    std::uint32_t count = 0;
    std::uint32_t rows = 0;
    std::uint32_t cols = 0;
    std::vector<std::uint8_t> pixels;

    friend bool operator==(const IdxImages&, const IdxImages&) = default;
};

// IDX label container: magic 2049, count, then count bytes each in [0, 9].
struct IdxLabels {
    std::uint32_t count = 0;
    std::vector<std::uint8_t> labels;

    friend bool operator==(const IdxLabels&, const IdxLabels&) = default;
};

IdxImages parse_idx_images(const std::vector<std::uint8_t>& bytes);
IdxLabels parse_idx_labels(const std::vector<std::uint8_t>& bytes);

std::vector<std::uint8_t> idx_image_bytes(const IdxImages& images);
std::vector<std::uint8_t> idx_label_bytes(const IdxLabels& labels);

IdxImages read_idx_images(const std::string& path);
IdxLabels read_idx_labels(const std::string& path);
void write_idx_images(const std::string& path, const IdxImages& images);
void write_idx_labels(const std::string& path, const IdxLabels& labels);

// First `limit` samples in file order (or, when balanced, the first
// limit/10 of each digit class). Pixels are flattened row-major and scaled
// by 1/255; labels become one-hot vectors over 10 classes.
Dataset idx_to_dataset(const IdxImages& images, const IdxLabels& labels,
                       std::size_t limit, bool balanced = false);

Dataset load_mnist(const std::string& images_path, const std::string& labels_path,
                   std::size_t limit, bool balanced = false);

// Inverse of idx_to_dataset for in-range pixel values: bytes are
// round(x * 255) and labels the argmax of each one-hot vector.
std::pair<IdxImages, IdxLabels> dataset_to_idx(const Dataset& data,
                                               std::uint32_t rows, std::uint32_t cols);

// kind "xor": the four XOR patterns over two one-hot classes.
// kind "gaussian_blobs": 40 samples, 10 per class, centered on the corners
// of the unit square with sigma 0.08, clamped to [0, 1].
Dataset make_synthetic(const std::string& kind, std::uint64_t seed);

} // namespace grwc

#endif
