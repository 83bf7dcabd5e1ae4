#include <gtest/gtest.h>

#include <map>
#include <random>

#include "framerestore/core/rng.hpp"
#include "framerestore/metrics/blob_detector.hpp"
#include "framerestore/metrics/matching.hpp"

namespace fr = framerestore;
namespace fm = framerestore::metrics;

namespace {

// Independent connected-components reference: union-find over the threshold
// mask (the detector itself uses an explicit BFS stack).
struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)) {
    for (int i = 0; i < n; ++i) parent[static_cast<std::size_t>(i)] = i;
  }
  int find(int a) {
    while (parent[static_cast<std::size_t>(a)] != a) {
      parent[static_cast<std::size_t>(a)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(a)])];
      a = parent[static_cast<std::size_t>(a)];
    }
    return a;
  }
  void unite(int a, int b) { parent[static_cast<std::size_t>(find(a))] = find(b); }
};

struct ReferenceComponent {
  int min_x, min_y, max_x, max_y;
  double sum = 0.0;
  std::size_t count = 0;
};

std::vector<ReferenceComponent> reference_components(const fr::ImageTensor& img, double threshold,
                                                     int channel) {
  int h = img.height(), w = img.width();
  UnionFind uf(h * w);
  auto above = [&](int y, int x) { return img.at(y, x, channel) > threshold; };
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      if (!above(y, x)) continue;
      if (x + 1 < w && above(y, x + 1)) uf.unite(y * w + x, y * w + x + 1);
      if (y + 1 < h && above(y + 1, x)) uf.unite(y * w + x, (y + 1) * w + x);
    }
  std::map<int, ReferenceComponent> comps;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      if (!above(y, x)) continue;
      int root = uf.find(y * w + x);
      auto it = comps.find(root);
      if (it == comps.end())
        it = comps.emplace(root, ReferenceComponent{x, y, x, y}).first;
      it->second.min_x = std::min(it->second.min_x, x);
      it->second.max_x = std::max(it->second.max_x, x);
      it->second.min_y = std::min(it->second.min_y, y);
      it->second.max_y = std::max(it->second.max_y, y);
      it->second.sum += img.at(y, x, channel);
      ++it->second.count;
    }
  std::vector<ReferenceComponent> out;
  for (auto& [root, c] : comps) out.push_back(c);
  return out;
}

void paint_ellipse(fr::ImageTensor& img, double cx, double cy, double ax, double ay, float value,
                   int channel) {
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x) {
      double u = ((x + 0.5) - cx) / ax;
      double v = ((y + 0.5) - cy) / ay;
      if (u * u + v * v <= 1.0) img.at(y, x, channel) = value;
    }
}

}  // namespace

TEST(BlobDetector, BlankImageNoDetections) {
  auto img = fr::ImageTensor::filled(32, 32, {0.2f, 0.2f, 0.2f});
  EXPECT_TRUE(fm::toy_blob_detector(img, 0.5).empty());
}

TEST(BlobDetector, SingleEllipse) {
  auto img = fr::ImageTensor::filled(48, 48, {0.1f, 0.1f, 0.1f});
  paint_ellipse(img, 24, 20, 8, 5, 0.9f, 0);
  auto detections = fm::toy_blob_detector(img, 0.5, 0);
  ASSERT_EQ(detections.size(), 1u);
  // Detected tight box contains the painted ellipse bounds.
  EXPECT_LE(detections[0].box.x_min, 24 - 8 + 1);
  EXPECT_GE(detections[0].box.x_max, 24 + 8 - 1);
  EXPECT_NEAR(detections[0].confidence, 0.9, 1e-5);
}

TEST(BlobDetector, TwoSeparatedEllipsesMatchFloodFillReference) {
  auto img = fr::ImageTensor::filled(64, 64, {0.1f, 0.1f, 0.1f});
  paint_ellipse(img, 16, 16, 6, 4, 0.8f, 0);
  paint_ellipse(img, 46, 44, 5, 7, 0.95f, 0);
  auto detections = fm::toy_blob_detector(img, 0.5, 0);
  auto reference = reference_components(img, 0.5, 0);
  ASSERT_EQ(detections.size(), 2u);
  ASSERT_EQ(reference.size(), 2u);
}

TEST(BlobDetector, RandomImagesMatchFloodFillReference) {
  std::mt19937_64 rng(301);
  for (int trial = 0; trial < 60; ++trial) {
    fr::ImageTensor img(24, 24);
    for (auto& v : img.data()) v = static_cast<float>(fr::draw_unit(rng));
    double threshold = fr::draw_range(rng, 0.3, 0.9);
    int channel = fr::draw_int(rng, 0, 2);

    auto detections = fm::toy_blob_detector(img, threshold, channel);
    auto reference = reference_components(img, threshold, channel);
    ASSERT_EQ(detections.size(), reference.size()) << "trial " << trial;

    // Compare as multisets of (box, confidence).
    auto key = [](double x0, double y0, double x1, double y1, double conf) {
      char buf[96];
      std::snprintf(buf, sizeof(buf), "%.3f|%.3f|%.3f|%.3f|%.4f", x0, y0, x1, y1, conf);
      return std::string(buf);
    };
    std::multiset<std::string> got, expected;
    for (const auto& d : detections)
      got.insert(key(d.box.x_min, d.box.y_min, d.box.x_max, d.box.y_max, d.confidence));
    for (const auto& c : reference)
      expected.insert(key(c.min_x, c.min_y, c.max_x + 1, c.max_y + 1, c.sum / static_cast<double>(c.count)));
    EXPECT_EQ(got, expected) << "trial " << trial;
  }
}

TEST(BlobDetector, ConfidenceWithinUnitRange) {
  std::mt19937_64 rng(302);
  fr::ImageTensor img(16, 16);
  for (auto& v : img.data()) v = static_cast<float>(fr::draw_unit(rng));
  for (const auto& det : fm::toy_blob_detector(img, 0.4, 1)) {
    EXPECT_GE(det.confidence, 0.0);
    EXPECT_LE(det.confidence, 1.0);
    EXPECT_NO_THROW(det.validate());
  }
}

TEST(DetectionFiles, RoundTrip) {
  auto dir = std::filesystem::temp_directory_path() / "framerestore_detfile";
  std::filesystem::create_directories(dir);
  std::map<std::string, std::vector<fr::Detection>> by_frame;
  by_frame["frame_a"] = {fr::Detection{{1.5, 2.5, 10.25, 12.75}, 0.875, 0}};
  by_frame["frame_b"] = {fr::Detection{{0, 0, 5, 5}, 0.5, 0},
                         fr::Detection{{3, 3, 9, 9}, 0.25, 0}};
  fm::save_detections(by_frame, dir / "dets.txt");
  auto back = fm::load_detections(dir / "dets.txt");
  ASSERT_EQ(back.size(), 2u);
  ASSERT_EQ(back["frame_b"].size(), 2u);
  EXPECT_NEAR(back["frame_a"][0].box.x_max, 10.25, 1e-6);
  EXPECT_NEAR(back["frame_a"][0].confidence, 0.875, 1e-6);
  std::filesystem::remove_all(dir);
}

TEST(DetectionFiles, MalformedLineThrows) {
  auto dir = std::filesystem::temp_directory_path() / "framerestore_detfile_bad";
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "bad.txt");
    out << "frame_a 1 2 3\n";
  }
  EXPECT_THROW(fm::load_detections(dir / "bad.txt"), fr::DataError);
  std::filesystem::remove_all(dir);
}
