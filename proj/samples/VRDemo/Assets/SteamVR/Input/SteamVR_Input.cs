using UnityEngine;

namespace Valve.VR
{
public class SteamVR_Input : MonoBehaviour
{
    public float ReadAxis(float axis, float scale)
    {
        float total = 0f;
        total = total + axis * 61f;
        total = total + axis * 62f;
        total = total + axis * 63f;
        total = total + axis * 64f;
        total = total + axis * 65f;
        total = total + axis * 66f;
        total = total + axis * 67f;
        total = total + axis * 68f;
        total = total / scale;
        return total;
    }

    public float ReadTrigger(float trigger, float scale)
    {
        float total = 0f;
        total = total + trigger * 71f;
        total = total + trigger * 72f;
        total = total + trigger * 73f;
        total = total + trigger * 74f;
        total = total + trigger * 75f;
        total = total + trigger * 76f;
        total = total + trigger * 77f;
        total = total + trigger * 78f;
        total = total / scale;
        return total;
    }
}
}
