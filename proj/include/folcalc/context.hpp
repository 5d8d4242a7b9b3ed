#pragma once

// Per-model cache of frame data and per-block operator matrices.  Blocks of the
// same class share one BlockOperators instance.

#include "folcalc/frame.hpp"

#include <map>
#include <memory>
#include <mutex>

namespace folcalc {

class ModelContext {
public:
    explicit ModelContext(ModelPtr model)
        : model_(std::move(model)), frame_(std::make_shared<const FrameData>(model_)) {
        if (model_->q() % 2 != 0) throw FolcalcError("OddCodimension", "codimension must be even");
    }

    const ModelFoliation& model() const { return *model_; }
    const ModelPtr& model_ptr() const { return model_; }
    const FrameData& frame() const { return *frame_; }
    const FramePtr& frame_ptr() const { return frame_; }
    int num_blocks() const { return model_->spectrum->num_blocks(); }

    BlockOperators& block(int b) {
        const int cls = model_->spectrum->block_class(b);
        std::lock_guard lk(mu_);
        auto it = blocks_.find(cls);
        if (it == blocks_.end()) it = blocks_.emplace(cls, std::make_unique<BlockOperators>(frame_, b)).first;
        return *it->second;
    }

    /// Shared context for a model instance.
    static std::shared_ptr<ModelContext> of(const ModelPtr& m) {
        static std::mutex reg_mu;
        static std::map<const ModelFoliation*, std::shared_ptr<ModelContext>> reg;
        std::lock_guard lk(reg_mu);
        auto it = reg.find(m.get());
        if (it != reg.end() && it->second->model_ptr() == m) return it->second;
        auto ctx = std::make_shared<ModelContext>(m);
        reg[m.get()] = ctx;
        return ctx;
    }

private:
    ModelPtr model_;
    FramePtr frame_;
    std::map<int, std::unique_ptr<BlockOperators>> blocks_;
    std::mutex mu_;
};

using ContextPtr = std::shared_ptr<ModelContext>;

}  // namespace folcalc
