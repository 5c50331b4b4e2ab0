using UnityEngine;

namespace Demo
{
public class PlayerController : MonoBehaviour
{
    public float ComputeSpeed(float speed, float scale)
    {
        float total = 0f;
        total = total + speed * 1f;
        total = total + speed * 2f;
        total = total + speed * 3f;
        total = total + speed * 4f;
        total = total + speed * 5f;
        total = total + speed * 6f;
        total = total + speed * 7f;
        total = total + speed * 8f;
        total = total / scale;
        return total;
    }

    public float ComputeJump(float height, float scale)
    {
        float total = 0f;
        total = total + height * 11f;
        total = total + height * 12f;
        total = total + height * 13f;
        total = total + height * 14f;
        total = total + height * 15f;
        total = total + height * 16f;
        total = total + height * 17f;
        total = total + height * 18f;
        total = total / scale;
        return total;
    }

    public float ComputeTurn(float angle, float scale)
    {
        float total = 0f;
        total = total + angle * 21f;
        total = total + angle * 22f;
        total = total + angle * 23f;
        total = total + angle * 24f;
        total = total + angle * 25f;
        total = total + angle * 26f;
        total = total + angle * 27f;
        total = total + angle * 28f;
        total = total + angle * 29f;
        total = total / scale;
        return total;
    }
}
}
