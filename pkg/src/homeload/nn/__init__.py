"""Feed-forward and bidirectional recurrent regressors trained by backpropagation."""

from .network import (
    PARAM_ORDER,
    BrnnModel,
    NetModel,
    NetworkArch,
    forward_batch,
    forward_sequence,
    init_network,
    load_network,
    loss_and_gradients,
    predict_nn,
    save_network,
)
from .training import (
    Adam,
    BRNNRegressor,
    EarlyStopping,
    FFNNRegressor,
    TrainHyper,
    TrainLog,
    ffnn_train_predict,
    split_verification,
    train,
    train_arrays,
)

__all__ = [
    "PARAM_ORDER", "BrnnModel", "NetModel", "NetworkArch", "forward_batch", "forward_sequence",
    "init_network", "load_network", "loss_and_gradients", "predict_nn", "save_network", "Adam",
    "BRNNRegressor", "EarlyStopping", "FFNNRegressor", "TrainHyper", "TrainLog",
    "ffnn_train_predict", "split_verification", "train", "train_arrays",
]
