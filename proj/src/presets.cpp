#include "kge/config.hpp"

namespace kge {

// Best-found configurations for the whole-graph link-prediction runs and the
// four downstream polypharmacy tasks (scratch and pretrained variants).
const std::map<std::string, std::string>& preset_texts() {
    static const std::map<std::string, std::string> presets = {
        {"complex-biokg", R"(model = ComplEx
embedding_size = 512
training_type = 1vsAll
max_epochs = 200
reciprocal = true
loss = CE
optimizer = Adagrad
optimizer.batch_size = 128
optimizer.learning_rate = 0.417
optimizer.scheduler_patience = 10
regularizer = F2
regularizer.entity_weight = 6.63e-7
regularizer.relation_weight = 2.57e-15
regularizer.frequency_weighting = false
dropout.entity_embedding = 0.407
dropout.relation_embedding = 0.0370
init = XavierNormal
seed = 0
)"},
        {"distmult-biokg", R"(model = DistMult
embedding_size = 128
training_type = 1vsAll
max_epochs = 200
reciprocal = false
loss = CE
optimizer = Adagrad
optimizer.batch_size = 128
optimizer.learning_rate = 0.417
optimizer.scheduler_patience = 10
regularizer = F2
regularizer.entity_weight = 6.63e-7
regularizer.relation_weight = 2.57e-15
regularizer.frequency_weighting = false
dropout.entity_embedding = 0.407
dropout.relation_embedding = 0.0370
init = XavierNormal
seed = 0
)"},
        {"transe-biokg", R"(model = TransE
embedding_size = 256
training_type = 1vsAll
max_epochs = 200
reciprocal = true
loss = CE
optimizer = Adagrad
optimizer.batch_size = 256
optimizer.learning_rate = 9.85e-3
optimizer.scheduler_patience = 10
regularizer = None
dropout.entity_embedding = 0.117
dropout.relation_embedding = 0.000
init = Normal
init.normal_std = 4.12e-4
seed = 0
)"},
        {"transh-biokg", R"(model = TransH
embedding_size = 256
training_type = NegSamp
negsamp.neg_subjects = 1
negsamp.neg_objects = 51
max_epochs = 200
reciprocal = true
loss = CE
optimizer = Adagrad
optimizer.batch_size = 256
optimizer.learning_rate = 8.61e-3
optimizer.scheduler_patience = 10
regularizer = None
dropout.entity_embedding = 0.0208
dropout.relation_embedding = 0.000
init = Normal
init.normal_std = 1.33e-3
seed = 0
)"},
        {"rotate-biokg", R"(model = RotatE
embedding_size = 1024
training_type = NegSamp
negsamp.neg_subjects = 3
negsamp.neg_objects = 1
max_epochs = 200
reciprocal = true
loss = CE
optimizer = Adagrad
optimizer.batch_size = 128
optimizer.learning_rate = 3.21e-3
optimizer.scheduler_patience = 10
regularizer = None
dropout.entity_embedding = 0.000
dropout.relation_embedding = 0.0392
init = XavierUniform
seed = 0
)"},
        {"conve-biokg", R"(model = ConvE
embedding_size = 1024
training_type = 1vsAll
max_epochs = 200
reciprocal = true
loss = CE
optimizer = Adagrad
optimizer.batch_size = 512
optimizer.learning_rate = 2.02e-3
optimizer.scheduler_patience = 10
regularizer = None
dropout.entity_embedding = 0.000
dropout.relation_embedding = 0.394
init = Normal
init.normal_std = 1.26e-3
seed = 0
)"},
        {"complex-ddi-efficacy", R"(model = ComplEx
embedding_size = 512
training_type = 1vsAll
max_epochs = 200
reciprocal = false
loss = CE
optimizer = Adagrad
optimizer.batch_size = 128
optimizer.learning_rate = 0.0918
optimizer.scheduler_patience = 10
regularizer = N3
regularizer.entity_weight = 3.29e-18
regularizer.relation_weight = 1.27e-5
regularizer.frequency_weighting = false
dropout.entity_embedding = 0.451
dropout.relation_embedding = 0.000
init = Normal
init.normal_std = 1.63e-3
seed = 0
)"},
        {"complex-p-ddi-efficacy", R"(model = ComplEx
embedding_size = 512
training_type = 1vsAll
max_epochs = 200
reciprocal = false
loss = CE
optimizer = Adagrad
optimizer.batch_size = 256
optimizer.learning_rate = 0.0229
optimizer.scheduler_patience = 10
regularizer = N3
regularizer.entity_weight = 9.36e-9
regularizer.relation_weight = 3.73e-4
regularizer.frequency_weighting = true
dropout.entity_embedding = 0.189
dropout.relation_embedding = 0.135
init = Uniform
init.uniform_lower_bound = -0.700
seed = 0
)"},
        {"complex-ddi-minerals", R"(model = ComplEx
embedding_size = 512
training_type = 1vsAll
max_epochs = 200
reciprocal = false
loss = CE
optimizer = Adagrad
optimizer.batch_size = 128
optimizer.learning_rate = 0.0918
optimizer.scheduler_patience = 10
regularizer = N3
regularizer.entity_weight = 3.29e-18
regularizer.relation_weight = 1.27e-5
regularizer.frequency_weighting = false
dropout.entity_embedding = 0.451
dropout.relation_embedding = 0.000
init = Normal
init.normal_std = 1.63e-3
seed = 0
)"},
        {"complex-p-ddi-minerals", R"(model = ComplEx
embedding_size = 512
training_type = 1vsAll
max_epochs = 200
reciprocal = false
loss = CE
optimizer = Adagrad
optimizer.batch_size = 256
optimizer.learning_rate = 0.0170
optimizer.scheduler_patience = 10
regularizer = L1
regularizer.entity_weight = 3.15e-13
regularizer.relation_weight = 2.03e-6
regularizer.frequency_weighting = true
dropout.entity_embedding = 0.000
dropout.relation_embedding = 0.0863
init = Uniform
init.uniform_lower_bound = -4.09e-4
seed = 0
)"},
        {"complex-dpi-fda", R"(model = ComplEx
embedding_size = 512
training_type = 1vsAll
max_epochs = 200
reciprocal = true
loss = CE
optimizer = Adam
optimizer.batch_size = 128
optimizer.learning_rate = 0.0114
optimizer.scheduler_patience = 10
regularizer = None
regularizer.frequency_weighting = true
dropout.entity_embedding = 0.000
dropout.relation_embedding = 0.159
init = Normal
init.normal_std = 1.78e-5
seed = 0
)"},
        {"complex-p-dpi-fda", R"(model = ComplEx
embedding_size = 512
training_type = 1vsAll
max_epochs = 200
reciprocal = true
loss = CE
optimizer = Adagrad
optimizer.batch_size = 1024
optimizer.learning_rate = 1.50e-3
optimizer.scheduler_patience = 10
regularizer = None
regularizer.frequency_weighting = true
dropout.entity_embedding = 0.345
dropout.relation_embedding = 0.462
init = Normal
init.normal_std = 3.02e-3
seed = 0
)"},
        {"complex-dep-fda-exp", R"(model = ComplEx
embedding_size = 512
training_type = 1vsAll
max_epochs = 200
reciprocal = true
loss = CE
optimizer = Adagrad
optimizer.batch_size = 1024
optimizer.learning_rate = 0.156
optimizer.scheduler_patience = 10
regularizer = None
regularizer.frequency_weighting = true
dropout.entity_embedding = 0.000
dropout.relation_embedding = 0.259
init = XavierNormal
seed = 0
)"},
        {"complex-p-dep-fda-exp", R"(model = ComplEx
embedding_size = 512
training_type = 1vsAll
max_epochs = 200
reciprocal = true
loss = CE
optimizer = Adam
optimizer.batch_size = 1024
optimizer.learning_rate = 5.81e-3
optimizer.scheduler_patience = 10
regularizer = None
regularizer.frequency_weighting = true
dropout.entity_embedding = 0.000
dropout.relation_embedding = 0.0563
init = Uniform
init.uniform_lower_bound = -0.329
seed = 0
)"},
    };
    return presets;
}

}  // namespace kge
