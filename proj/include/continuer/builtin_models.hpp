#pragma once

#include <set>

#include "continuer/graph.hpp"

namespace continuer {

namespace detail {

// Tracks the tensor shape while appending layers to a sequence, so every
// LayerSpec records the input shape it actually sees.
class ShapeCursor {
 public:
  ShapeCursor(int h, int w, int c) : h_(h), w_(w), c_(c) {}

  ShapeCursor& conv(std::vector<LayerSpec>& seq, int kernel, int stride, int filters) {
    return push(seq, LayerSpec::conv(h_, w_, c_, kernel, stride, filters));
  }
  ShapeCursor& depthwise(std::vector<LayerSpec>& seq, int kernel, int stride) {
    return push(seq, LayerSpec::depthwise(h_, w_, c_, kernel, stride));
  }
  ShapeCursor& max_pool(std::vector<LayerSpec>& seq, int kernel, int stride) {
    return push(seq, LayerSpec::max_pool(h_, w_, c_, kernel, stride));
  }
  ShapeCursor& dense(std::vector<LayerSpec>& seq, int units) {
    return push(seq, LayerSpec::dense(h_, w_, c_, units));
  }
  ShapeCursor& plain(std::vector<LayerSpec>& seq, LayerType t) {
    return push(seq, LayerSpec::plain(t, h_, w_, c_));
  }

  int h() const { return h_; }
  int w() const { return w_; }
  int c() const { return c_; }

 private:
  ShapeCursor& push(std::vector<LayerSpec>& seq, LayerSpec layer) {
    seq.push_back(layer);
    auto [oh, ow] = layer.output_shape();
    h_ = oh;
    w_ = ow;
    c_ = layer.output_channels();
    return *this;
  }

  int h_, w_, c_;
};

// Basic residual block: two 3x3 convolutions plus the elementwise add. The
// first block of a stage may downsample, which adds a 1x1 projection on the
// shortcut path.
inline Block resnet_block(int id, int& h, int& w, int in_c, int out_c, int stride) {
  Block block;
  block.block_id = id;
  block.is_residual = true;

  ShapeCursor cur(h, w, in_c);
  cur.conv(block.layers, 3, stride, out_c);
  cur.plain(block.layers, LayerType::BatchNorm);
  cur.plain(block.layers, LayerType::ReLU);
  cur.conv(block.layers, 3, 1, out_c);
  cur.plain(block.layers, LayerType::BatchNorm);
  if (stride != 1 || in_c != out_c) {
    // projection shortcut
    block.layers.push_back(LayerSpec::conv(h, w, in_c, 1, stride, out_c));
  }
  cur.plain(block.layers, LayerType::Add);
  cur.plain(block.layers, LayerType::ReLU);

  h = cur.h();
  w = cur.w();
  return block;
}

// Inverted residual block (expand -> depthwise -> project). Expansion is
// skipped when the expand ratio is 1; the Add is present only on identity
// blocks (stride 1, unchanged channel count).
inline Block mobilenet_block(int id, int& h, int& w, int in_c, int out_c, int stride,
                             int expand) {
  Block block;
  block.block_id = id;
  block.is_residual = (stride == 1 && in_c == out_c);

  ShapeCursor cur(h, w, in_c);
  if (expand != 1) {
    cur.conv(block.layers, 1, 1, in_c * expand);
    cur.plain(block.layers, LayerType::BatchNorm);
    cur.plain(block.layers, LayerType::ReLU);
  }
  cur.depthwise(block.layers, 3, stride);
  cur.plain(block.layers, LayerType::BatchNorm);
  cur.plain(block.layers, LayerType::ReLU);
  cur.conv(block.layers, 1, 1, out_c);
  cur.plain(block.layers, LayerType::BatchNorm);
  if (block.is_residual) cur.plain(block.layers, LayerType::Add);

  h = cur.h();
  w = cur.w();
  return block;
}

inline SkipConnection single_block_skip(int skip_id, int bypassed) {
  SkipConnection s;
  s.skip_id = skip_id;
  s.from_block = bypassed - 1;
  s.to_block = bypassed + 1;
  s.bypassed_blocks = {bypassed};
  return s;
}

}  // namespace detail

// ResNet-32 for 32x32x3 inputs: conv/bn/relu stem, 15 residual blocks in
// three stages (16, 32, 64 channels), global-average-pool + dense tail.
// 13 exit points (one behind each of the first 13 blocks) and 10 skip
// connections, each bypassing a single block. Skip ids follow the bypassed
// block's position; the downsampling blocks 5 and 10 change tensor shape and
// cannot be bypassed, so no skip exists there (nor behind block 13+).
inline DnnGraph build_resnet32() {
  DnnGraph g;
  g.name = "resnet32";
  g.baseline_accuracy = 0.8252;

  int h = 32, w = 32;
  detail::ShapeCursor stem(h, w, 3);
  stem.conv(g.head_layers, 3, 1, 16);
  stem.plain(g.head_layers, LayerType::BatchNorm);
  stem.plain(g.head_layers, LayerType::ReLU);

  int c = 16;
  for (int stage = 0; stage < 3; ++stage) {
    const int out_c = 16 << stage;
    for (int i = 0; i < 5; ++i) {
      const int id = stage * 5 + i;
      const int stride = (stage > 0 && i == 0) ? 2 : 1;
      g.blocks.push_back(detail::resnet_block(id, h, w, c, out_c, stride));
      c = out_c;
    }
  }

  detail::ShapeCursor tail(h, w, c);
  tail.plain(g.tail_layers, LayerType::GlobalAveragePool);
  tail.dense(g.tail_layers, 10);

  for (int b = 0; b < 13; ++b) {
    ExitPoint e;
    e.exit_id = b + 1;
    e.after_block = b;
    const LayerSpec& last = g.blocks[b].layers.back();
    detail::ShapeCursor cur(last.input_h, last.input_w, last.input_c);
    cur.conv(e.head_layers, 3, 2, 32);
    cur.max_pool(e.head_layers, 2, 2);
    cur.plain(e.head_layers, LayerType::BatchNorm);
    cur.dense(e.head_layers, 64);
    cur.dense(e.head_layers, 10);
    g.exits.push_back(e);
  }

  for (int pos : {1, 2, 3, 4, 6, 7, 8, 9, 11, 12})
    g.skips.push_back(detail::single_block_skip(pos, pos));

  return g;
}

// MobileNetV2 for 32x32x3 inputs: 17 inverted-residual blocks, 1x1
// convolution + global-average-pool + dense tail. Exit points sit behind the
// ten identity blocks (2, 4, 5, 7, 8, 9, 11, 12, 14, 15); exit heads differ
// per stage. Nine skip connections (ordinals 0..8) bypass the identity
// blocks from 4 onward; block 2 has no covering skip.
inline DnnGraph build_mobilenetv2() {
  DnnGraph g;
  g.name = "mobilenetv2";
  g.baseline_accuracy = 0.8554;

  int h = 32, w = 32;
  detail::ShapeCursor stem(h, w, 3);
  stem.conv(g.head_layers, 3, 1, 32);
  stem.plain(g.head_layers, LayerType::BatchNorm);
  stem.plain(g.head_layers, LayerType::ReLU);

  // expand ratio, output channels, repeats, first-block stride
  const struct { int expand, channels, repeats, stride; } stages[] = {
      {1, 16, 1, 1}, {6, 24, 2, 1}, {6, 32, 3, 2}, {6, 64, 4, 2},
      {6, 96, 3, 1}, {6, 160, 3, 2}, {6, 320, 1, 1},
  };

  int c = 32;
  int id = 0;
  for (const auto& st : stages) {
    for (int i = 0; i < st.repeats; ++i) {
      const int stride = (i == 0) ? st.stride : 1;
      g.blocks.push_back(detail::mobilenet_block(id++, h, w, c, st.channels, stride, st.expand));
      c = st.channels;
    }
  }

  detail::ShapeCursor tail(h, w, c);
  tail.conv(g.tail_layers, 1, 1, 1280);
  tail.plain(g.tail_layers, LayerType::GlobalAveragePool);
  tail.dense(g.tail_layers, 10);

  auto block_output = [&](int b) {
    const LayerSpec& last = g.blocks[b].layers.back();
    return detail::ShapeCursor(last.input_h, last.input_w, last.input_c);
  };

  // Exit head groups share the structure bn -> conv(s) -> global max pool ->
  // dense(64) -> dense(10); the convolution filters differ per stage.
  int exit_id = 1;
  for (int b : {2, 4, 5, 7, 8, 9, 11, 12, 14, 15}) {
    ExitPoint e;
    e.exit_id = exit_id++;
    e.after_block = b;
    detail::ShapeCursor cur = block_output(b);
    cur.plain(e.head_layers, LayerType::BatchNorm);
    if (b == 2) {
      cur.conv(e.head_layers, 3, 1, 96);
    } else if (b == 4 || b == 5) {
      cur.conv(e.head_layers, 3, 1, 160);
      cur.conv(e.head_layers, 3, 1, 80);
    } else if (b == 14 || b == 15) {
      cur.conv(e.head_layers, 3, 1, 160);
    } else {
      cur.conv(e.head_layers, 3, 1, 320);
    }
    cur.plain(e.head_layers, LayerType::GlobalMaxPool);
    cur.dense(e.head_layers, 64);
    cur.dense(e.head_layers, 10);
    g.exits.push_back(e);
  }

  int skip_id = 0;
  for (int pos : {4, 5, 7, 8, 9, 11, 12, 14, 15})
    g.skips.push_back(detail::single_block_skip(skip_id++, pos));

  return g;
}

}  // namespace continuer
