"""Rewrites ONNX graphs so OpenCV's DNN importer accepts them.

Recent PyTorch exporters emit Identity nodes that alias initializers;
OpenCV 4.5 cannot import those, so each one is replaced by a renamed copy
of the initializer it forwards.
"""

import onnx


def fold_identity_initializers(model: onnx.ModelProto) -> onnx.ModelProto:
    graph = model.graph
    initializers = {init.name: init for init in graph.initializer}
    kept = []
    for node in graph.node:
        if node.op_type == "Identity" and node.input[0] in initializers:
            alias = onnx.TensorProto()
            alias.CopyFrom(initializers[node.input[0]])
            alias.name = node.output[0]
            graph.initializer.append(alias)
        else:
            kept.append(node)
    del graph.node[:]
    graph.node.extend(kept)
    return model


def export(module, path: str, opset: int = 13) -> None:
    import io

    import torch

    buf = io.BytesIO()
    torch.onnx.export(
        module.eval(),
        torch.zeros(1, 3, 224, 224),
        buf,
        input_names=["input"],
        output_names=["logits"],
        opset_version=opset,
        dynamo=False,
    )
    model = fold_identity_initializers(onnx.load_from_string(buf.getvalue()))
    onnx.checker.check_model(model)
    onnx.save(model, path)
