"""Writes the replay corpus (completions only; prompt hashes are filled in by
`beamdraft agent --record`)."""
import json, os, sys

ROOT = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..")

def react(final, thoughts):
    body = "\n\n".join(thoughts)
    return f"{body}\n\nFinal Thought: I now know the final answer\n\nFinal Answer:\n<result>\n{final}\n</result>"

def step1(desc, kind):
    return (f"Description: {desc}\n\nFinal Answer: <result>The type of structural drawing is: {kind}</result>")

def tc(name, args, result):
    return {"name": name, "args": args, "result": result}

RC_DESC = ("I would like to draw a 24x14in RC cross-section with No 4 closed stirrups at 5 in. "
           "It needs three rebar layers. The top and bottom layer will have 4 No 8 and 2 No 4, "
           "respectively. The middle layer will have 2 No 4. Consider a 2in clear cover.")
RC_KIND = "rectangular concrete beam cross-section"

RC_FIELDS = """- Type of Structure: rectangular concrete beam cross-section
- Height of cross-section: 24in
- Width of cross-section: 14in
- Number of rebars: 3 layers
- Rebar information:
    - Top layer: 4 No 8
    - Middle layer: 2 No 4
    - Bottom layer: 2 No 4
- Stirrup information: No 4
- Thickness of clear cover: 2in"""

def rc_31(x4):
    return f"""- bottom left vertex: (0, 0)
- top left vertex: (0, 24)
- top right vertex: (14, 24)
- bottom right vertex: (14, 0)
- left appearance: x=0
- top appearance: y=24
- right appearance: x=14
- bottom appearance: y=0
- Height: 24in
- Width: 14in
- Radius of Stirrup: 0.25in
- Diameter of Stirrup: 0.5in
- Thickness of clear cover: 2in
- Total number of all rebars: 8
- Coordinates and radius of the center of each rebar:
    - Top layer: [(3in, 21in), 0.5in)], [(5.6667in, 21in), 0.5in)], [(8.3333in, 21in), 0.5in)], [({x4}in, 21in), 0.5in)]
    - Middle layer: [(2.75in, 11.875in), 0.25in)], [(11.25in, 11.875in), 0.25in)]
    - Bottom layer: [(2.75in, 2.75in), 0.25in)], [(11.25in, 2.75in), 0.25in)]"""

RC_32 = """- Radius of Stirrup: 0.25in
- Diameter of Stirrup: 0.5in
- C1: [(3in, 21in), 0.5in]
- C2: [(11in, 21in), 0.5in]
- C3: [(11.25in, 2.75in), 0.25in]
- C4: [(2.75in, 2.75in), 0.25in]
- L1: [(2.5, 21), (2.5, 2.75)]
- L2: [(3.9142, 21.5), (11, 21.5)]
- L3: [(11.5, 21), (11.5, 2.75)]
- L4: [(2.75, 2.5), (11.25, 2.5)]
- L5: [(2, 21), (2, 2.75)]
- L6: [(3, 22), (11, 22)]
- L7: [(12, 21), (12, 2.75)]
- L8: [(2.75, 2), (11.25, 2)]
- A1: [3, 21, 1, 45, 180]
- A2: [11, 21, 1, 0, 90]
- A3: [11.25, 2.75, 0.75, 270, 0]
- A4: [2.75, 2.75, 0.75, 180, 270]
- Length of Hook: 3 inches"""

RC_33 = """- Lh1: [(3.7071, 21.7071), (5.8284, 19.5858)]
- Lh2: [(3.3536, 21.3536), (5.4749, 19.2322)]
- Lh3: [(5.8284, 19.5858), (5.4749, 19.2322)]
- Lh4: [(2.6464, 20.6464), (4.7678, 18.5251)]
- Lh5: [(2.5, 20.0858), (4.4142, 18.1716)]
- Lh6: [(4.7678, 18.5251), (4.4142, 18.1716)]"""

RC_JSON = """{
    "Save": false,
    "Unit": "Inch",
    "Type of Structural Drawing": "rectangular concrete beam cross-section",
    "Coordinates of Four Vertices": {
        "bottom left": [0, 0],
        "top left": [0, 24],
        "top right": [14, 24],
        "bottom right": [14, 0]
    },
    "End Point of Four Sides": {
        "left": { "end1": [0, 0], "end2": [0, 24] },
        "top": { "end1": [0, 24], "end2": [14, 24] },
        "right": { "end1": [14, 24], "end2": [14, 0] },
        "bottom": { "end1": [14, 0], "end2": [0, 0] }
    },
    "Center of Rebars": [
        [3, 21], [5.6667, 21], [8.3333, 21], [11, 21],
        [2.75, 11.875], [11.25, 11.875], [2.75, 2.75], [11.25, 2.75]
    ],
    "Radius of Rebars": [
        0.5, 0.5, 0.5, 0.5,
        0.25, 0.25, 0.25, 0.25
    ],
    "Radius and Diameter of Stirrup": [0.25, 0.5],
    "End Points of Internal and External Lines of Stirrup": {
        "L1": { "end1": [2.5, 21], "end2": [2.5, 2.75] },
        "L2": { "end1": [3.9142, 21.5], "end2": [11, 21.5] },
        "L3": { "end1": [11.5, 21], "end2": [11.5, 2.75] },
        "L4": { "end1": [2.75, 2.5], "end2": [11.25, 2.5] },
        "L5": { "end1": [2, 21], "end2": [2, 2.75] },
        "L6": { "end1": [3, 22], "end2": [11, 22] },
        "L7": { "end1": [12, 21], "end2": [12, 2.75] },
        "L8": { "end1": [2.75, 2], "end2": [11.25, 2] }
    },
    "Arc Lines of Stirrup": {
        "A1": [3, 21, 1, 45, 180],
        "A2": [11, 21, 1, 0, 90],
        "A3": [11.25, 2.75, 0.75, 270, 0],
        "A4": [2.75, 2.75, 0.75, 180, 270]
    },
    "Hook lines of Stirrup": {
        "Lh1": { "end1": [3.7071, 21.7071], "end2": [5.8284, 19.5858] },
        "Lh2": { "end1": [3.3536, 21.3536], "end2": [5.4749, 19.2322] },
        "Lh3": { "end1": [5.8284, 19.5858], "end2": [5.4749, 19.2322] },
        "Lh4": { "end1": [2.6464, 20.6464], "end2": [4.7678, 18.5251] },
        "Lh5": { "end1": [2.5, 20.0858], "end2": [4.4142, 18.1716] },
        "Lh6": { "end1": [4.7678, 18.5251], "end2": [4.4142, 18.1716] }
    }
}"""

RC_SCRIPT = """from pyautocad import Autocad, APoint
from math import radians

acad = Autocad()
acad.doc.SetVariable('INSUNITS', 1)

vertices = {
    "bottom_left": APoint(0, 0),
    "top_left": APoint(0, 24),
    "top_right": APoint(14, 24),
    "bottom_right": APoint(14, 0)
}

sides = {
    "left": acad.model.AddLine(APoint(0, 0), APoint(0, 24)),
    "top": acad.model.AddLine(APoint(0, 24), APoint(14, 24)),
    "right": acad.model.AddLine(APoint(14, 24), APoint(14, 0)),
    "bottom": acad.model.AddLine(APoint(14, 0), APoint(0, 0))
}

rebars = [
    acad.model.AddCircle(APoint(3, 21), 0.5),
    acad.model.AddCircle(APoint(5.6667, 21), 0.5),
    acad.model.AddCircle(APoint(8.3333, 21), 0.5),
    acad.model.AddCircle(APoint(11, 21), 0.5),
    acad.model.AddCircle(APoint(2.75, 11.875), 0.25),
    acad.model.AddCircle(APoint(11.25, 11.875), 0.25),
    acad.model.AddCircle(APoint(2.75, 2.75), 0.25),
    acad.model.AddCircle(APoint(11.25, 2.75), 0.25)
]

stirrup_lines = {
    "L1": acad.model.AddLine(APoint(2.5, 21), APoint(2.5, 2.75)),
    "L2": acad.model.AddLine(APoint(3.9142, 21.5), APoint(11, 21.5)),
    "L3": acad.model.AddLine(APoint(11.5, 21), APoint(11.5, 2.75)),
    "L4": acad.model.AddLine(APoint(2.75, 2.5), APoint(11.25, 2.5)),
    "L5": acad.model.AddLine(APoint(2, 21), APoint(2, 2.75)),
    "L6": acad.model.AddLine(APoint(3, 22), APoint(11, 22)),
    "L7": acad.model.AddLine(APoint(12, 21), APoint(12, 2.75)),
    "L8": acad.model.AddLine(APoint(2.75, 2), APoint(11.25, 2))
}

stirrup_arcs = {
    "A1": acad.model.AddArc(APoint(3, 21), 1, radians(45), radians(180)),
    "A2": acad.model.AddArc(APoint(11, 21), 1, radians(0), radians(90)),
    "A3": acad.model.AddArc(APoint(11.25, 2.75), 0.75, radians(270), radians(0)),
    "A4": acad.model.AddArc(APoint(2.75, 2.75), 0.75, radians(180), radians(270))
}

stirrup_hooks = {
    "Lh1": acad.model.AddLine(APoint(3.7071, 21.7071), APoint(5.8284, 19.5858)),
    "Lh2": acad.model.AddLine(APoint(3.3536, 21.3536), APoint(5.4749, 19.2322)),
    "Lh3": acad.model.AddLine(APoint(5.8284, 19.5858), APoint(5.4749, 19.2322)),
    "Lh4": acad.model.AddLine(APoint(2.6464, 20.6464), APoint(4.7678, 18.5251)),
    "Lh5": acad.model.AddLine(APoint(2.5, 20.0858), APoint(4.4142, 18.1716)),
    "Lh6": acad.model.AddLine(APoint(4.7678, 18.5251), APoint(4.4142, 18.1716))
}"""

def rc_case(x4):
    calls31 = [
        tc("Add", [2, 0.5], "2.5"), tc("Add", [2.5, 0.5], "3"),
        tc("Minus", [14, 3], "11"), tc("Minus", [11, 3], "8"),
        tc("Divide", [8, 3], "2.6667"), tc("Add", [3, 2.6667], "5.6667"),
        tc("Divide", [16, 3], "5.3333"), tc("Add", [3, 5.3333], "8.3333"),
        tc("Minus", [24, 3], "21"), tc("Add", [2.5, 0.25], "2.75"),
        tc("Minus", [21, 2.75], "18.25"), tc("Divide", [18.25, 2], "9.125"),
        tc("Add", [2.75, 9.125], "11.875"), tc("Minus", [14, 2.75], "11.25"),
    ]
    calls32 = [
        tc("Sqrt", [2], "1.4142"), tc("Add", [2.5, 1.4142], "3.9142"),
        tc("Add", [0.5, 0.5], "1"), tc("Add", [0.25, 0.5], "0.75"),
        tc("Multiply", [6, 0.5], "3"),
    ]
    calls33 = [
        tc("Sqrt", [2], "1.4142"), tc("Divide", [1, 1.4142], "0.7071"),
        tc("Divide", [0.5, 1.4142], "0.3536"), tc("Add", [3, 0.7071], "3.7071"),
        tc("Add", [21, 0.7071], "21.7071"), tc("Multiply", [3, 0.7071], "2.1213"),
        tc("Add", [3.7071, 2.1213], "5.8284"), tc("Minus", [21.7071, 2.1213], "19.5858"),
        tc("Add", [3, 0.3536], "3.3536"), tc("Add", [3.3536, 2.1213], "5.4749"),
        tc("Minus", [21.3536, 2.1213], "19.2322"), tc("Minus", [3, 0.3536], "2.6464"),
        tc("Minus", [21, 0.3536], "20.6464"), tc("Add", [2.6464, 2.1213], "4.7678"),
        tc("Minus", [20.6464, 2.1213], "18.5251"), tc("Minus", [4.7678, 0.3536], "4.4142"),
        tc("Minus", [18.5251, 0.3536], "18.1716"),
    ]
    return [
        {"step": 1, "completion": step1(RC_DESC, RC_KIND)},
        {"step": 2, "completion": react(RC_FIELDS, [
            "Thought: I should find the useful information in the description.",
            "Action: Read the description and list each element with its information.",
            "Observation: height 24in, width 14in, three rebar layers, No 4 stirrups, 2in cover."])},
        {"step": 3, "sub_step": "3-1", "completion": react(rc_31(x4), [
            "Thought1: The bottom left vertex is the reference object for the vertices and layers.",
            "Action1: Take the vertices from the height and width; place layers from the clear cover, stirrup diameter and bar radii.",
            "Observation1: Top layer y = 24 - 2 - 0.5 - 0.5 = 21, bottom layer y = 2 + 0.5 + 0.25 = 2.75, spacing (11 - 3) / 3."]),
         "tool_calls": calls31},
        {"step": 3, "sub_step": "3-2", "completion": react(RC_32, [
            "Thought1: Corner rebars are the reference objects for the stirrup lines and arcs.",
            "Action1: Select C1 to C4 and offset them by the bar radius and the stirrup diameter.",
            "Observation1: Arc radii are r + Ds, hook length is max(6 * 0.5, 3) = 3."]),
         "tool_calls": calls32},
        {"step": 3, "sub_step": "3-3", "completion": react(RC_33, [
            "Thought1: The hook starts on the top left corner rebar C1.",
            "Action1: Offset along the 45 degree direction and extend by the hook length.",
            "Observation1: Hook legs run along (1, -1) / sqrt(2) with length 3."]),
         "tool_calls": calls33},
        {"step": 4, "completion": "Description: the user gives dimensions in inches and does not mention saving.\n\n<result>\nSave: False\nUnit: Inch\n</result>"},
        {"step": 5, "completion": react(RC_JSON, [
            "Thought1: I should find the keys required in the JSON requirement.",
            "Action1: Analyze the JSON requirement.",
            "Observation1: Save, Unit, type, vertices, sides, rebars, stirrup, arcs and hook lines."])},
        {"step": 6, "completion": "Thought: I should follow the steps with pyautocad commands.\n\n<result>\n" + RC_SCRIPT + "\n</result>"},
    ]

STEEL_DESC = "I would like to draw W1100X390"
STEEL_SCRIPT = """import pyautocad
import os
import time

acad = pyautocad.Autocad()

source_file_path = os.path.join(os.getcwd(), 'steelBeamDrawingSet', 'W1100X390.dwg')
source_document = acad.app.Documents.Open(source_file_path)
time.sleep(1)
acad.app.ActiveDocument = source_document
acad.app.ActiveDocument.SendCommand('SELECT ALL  ')
acad.app.ActiveDocument.SendCommand('COPYCLIP ')

target_file = os.path.join(os.getcwd(), 'targetfile.dwg')
target_document = acad.app.Documents.Open(target_file)
acad.app.ActiveDocument = target_document
acad.app.ActiveDocument.SendCommand('PASTECLIP 0,0 ')

source_document.Close()"""

STEEL_JSON = """{
    "Save": false,
    "Unit": "Millimeter",
    "Type of Structural drawing": "steel beam cross-section",
    "Type of the requested steel beam cross-section": "W1100X390",
    "Position of the bottom left of the steel beam cross-section": "(0, 0)"
}"""

def steel_case():
    return [
        {"step": 1, "completion": step1(STEEL_DESC, "steel beam cross-section")},
        {"step": 2, "completion": react("- Type of Structure: steel beam cross-section\n- Steel Beam Cross-section: W1100X390", [
            "Thought: The description names a standard steel section.",
            "Action: Extract the section name.",
            "Observation: W1100X390."])},
        {"step": 3, "completion": react("Type of Steel Beam Cross-section: W1100X390\nCoordinate of Bottom Left of the Cross-section: (0, 0)", [
            "Thought1: The bottom left vertex is the insertion point.",
            "Action1: No position is given, so the default applies.",
            "Observation1: (0, 0)."])},
        {"step": 4, "completion": "<result>\nSave: False\nUnit: Millimeter\n</result>"},
        {"step": 5, "completion": react(STEEL_JSON, [
            "Thought1: I should find the keys required in the JSON requirement.",
            "Action1: Analyze the JSON requirement.",
            "Observation1: Save, Unit, type, section and bottom left position."])},
        {"step": 6, "completion": "<result>\n" + STEEL_SCRIPT + "\n</result>"},
    ]

PRE_DESC = "I want to draw an I type I-Beam with four strands."
PRE_JSON = """{
    "Save": false,
    "Unit": "Millimeter",
    "Type of Structural drawing": "precast beam cross-section",
    "Type of the requested steel beam cross-section": "I-beam type I",
    "Position of the bottom left of the steel beam cross-section": "(0, 0)",
    "Position of the strands": "[3, 2], [5, 2], [7, 2], [9, 2]"
}"""
PRE_SCRIPT = """from pyautocad import Autocad, APoint
import os
import time

# Initialize AutoCAD application
acad = Autocad()

# Define source file path
source_file_path = os.path.join(os.getcwd(), 'Preset_Prestressed_Concrete', 'I-Beam_I.dwg')

# Open source document
source_document = acad.app.Documents.Open(source_file_path)
acad.app.ActiveDocument = source_document

# Select all objects in the source file
acad.app.ActiveDocument.SendCommand('SELECT ALL  ')

# Copy selected objects
acad.app.ActiveDocument.SendCommand('COPYCLIP ')

# Define target file path
target_file = os.path.join(os.getcwd(), 'targetfile.dwg')

# Open target document
target_document = acad.app.Documents.Open(target_file)
acad.app.ActiveDocument = target_document

# Paste objects into target file at origin
acad.app.ActiveDocument.SendCommand('PASTECLIP 0,0 ')

# Close source document
source_document.Close()

# Add strands to the target document
strand_coordinates = [[3, 2], [5, 2], [7, 2], [9, 2]]
for coord in strand_coordinates:
    center = APoint(coord[0], coord[1])
    acad.model.AddCircle(center, 0.5)"""

def precast_case():
    return [
        {"step": 1, "completion": step1(PRE_DESC, "precast beam cross-section")},
        {"step": 2, "completion": react("- Type of Structure: I-beam type I\n- Position: Bottom Left Vertex: (0, 0)\n- Number of Strands: 4", [
            "Thought: The description names a precast section and a strand count.",
            "Action: Extract the section, position and strand count.",
            "Observation: I-beam type I, default position, four strands."])},
        {"step": 3, "completion": react("Type of Precast Beam Cross-section: I-Beam Type I\nCoordinate of Bottom Left of the Cross-section: (0, 0)\nPositions of Strands: [3, 2], [5, 2], [7, 2], [9, 2]", [
            "Thought1: Strand positions come from the catalog order for this section.",
            "Action1: Take the first four catalog positions.",
            "Observation1: [3, 2], [5, 2], [7, 2], [9, 2]."])},
        {"step": 4, "completion": "Final Answer:\n<result>\nSave: False\nUnit: Millimeter\n</result>"},
        {"step": 5, "completion": react(PRE_JSON, [
            "Thought1: I should find the keys required in the JSON requirement.",
            "Action1: Analyze the JSON requirement.",
            "Observation1: Save, Unit, type, section, bottom left position and strands."])},
        {"step": 6, "completion": "<result>\n" + PRE_SCRIPT + "\n</result>"},
    ]

def write(case_dir, desc, fields, case, replay):
    os.makedirs(case_dir, exist_ok=True)
    open(os.path.join(case_dir, "description.txt"), "w").write(desc + "\n")
    open(os.path.join(case_dir, "fields.txt"), "w").write(fields + "\n")
    open(os.path.join(case_dir, "case.json"), "w").write(json.dumps(case, indent=2) + "\n")
    open(os.path.join(case_dir, "replay.json"), "w").write(json.dumps(replay, indent=2) + "\n")

corpus = os.path.join(ROOT, "corpus")
fixtures = os.path.join(ROOT, "fixtures")
write(os.path.join(corpus, "rc_24x14"), RC_DESC, RC_FIELDS + "\n- Save: False\n- Unit: Inch",
      {"kind": RC_KIND, "unit": "Inch", "save": False}, rc_case(11))
write(os.path.join(corpus, "steel_w1100x390"), STEEL_DESC,
      "- Type of Structure: steel beam cross-section\n- Steel Beam Cross-section: W1100X390\n- Save: False\n- Unit: Millimeter",
      {"kind": "steel beam cross-section", "unit": "Millimeter", "save": False}, steel_case())
write(os.path.join(corpus, "precast_itype1"), PRE_DESC,
      "- Type of Structure: I-beam type I\n- Position: Bottom Left Vertex: (0, 0)\n- Number of Strands: 4\n- Save: False\n- Unit: Millimeter",
      {"kind": "precast beam cross-section", "unit": "Millimeter", "save": False}, precast_case())
write(os.path.join(fixtures, "rc_24x14_step3_error"), RC_DESC, RC_FIELDS + "\n- Save: False\n- Unit: Inch",
      {"kind": RC_KIND, "unit": "Inch", "save": False}, rc_case(13))
