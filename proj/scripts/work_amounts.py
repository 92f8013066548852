#!/usr/bin/env python3
"""Work amounts (MACs or pixels) used by the builtin catalog."""

RESNET18 = {
    # (in_ch, out_ch, kernel, out_hw) per conv layer of each stage, 1x1 shortcuts included.
    "conv2_x": [(64, 64, 3, 56)] * 4,
    "conv3_x": [(64, 128, 3, 28), (128, 128, 3, 28), (128, 128, 3, 28), (128, 128, 3, 28), (64, 128, 1, 28)],
    "conv4_x": [(128, 256, 3, 14), (256, 256, 3, 14), (256, 256, 3, 14), (256, 256, 3, 14), (128, 256, 1, 14)],
    "conv5_x": [(256, 512, 3, 7), (512, 512, 3, 7), (512, 512, 3, 7), (512, 512, 3, 7), (256, 512, 1, 7)],
}

# MobileNet-v1 depthwise/pointwise pairs: (in_ch, out_ch, out_hw).
MOBILENET_PAIRS = [
    (32, 64, 112),
    (64, 128, 56), (128, 128, 56),
    (128, 256, 28), (256, 256, 28),
    (256, 512, 14), (512, 512, 14), (512, 512, 14), (512, 512, 14), (512, 512, 14), (512, 512, 14),
    (512, 1024, 7), (1024, 1024, 7),
]
MOBILENET_GROUPS = {"conv_dw_pw_2_x": range(1, 3), "conv_dw_pw_3_x": range(3, 5), "conv_dw_pw_4_x": range(5, 11)}

FRAME_PIXELS = 1920 * 1080


def conv_macs(cin, cout, k, hw):
    return cin * cout * k * k * hw * hw


def dw_pw_macs(cin, cout, hw):
    return cin * 9 * hw * hw + cin * cout * hw * hw


def work_amounts():
    out = {("resnet18", t): sum(conv_macs(*layer) for layer in layers) for t, layers in RESNET18.items()}
    for task, idx in MOBILENET_GROUPS.items():
        out[("mobilenet", task)] = sum(dw_pw_macs(*MOBILENET_PAIRS[i]) for i in idx)
    out[("camera_pipeline", "camera_pipeline")] = FRAME_PIXELS
    out[("harris", "harris")] = FRAME_PIXELS
    return out


if __name__ == "__main__":
    for (app, task), work in work_amounts().items():
        print(f"{app},{task},{work}")
