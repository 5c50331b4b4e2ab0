using UnityEngine;

namespace Demo
{
public class EnemyController : MonoBehaviour
{
    public float ComputeVelocity(float velocity, float scale)
    {
        float total = 0f;
        total = total + velocity * 1f;
        total = total + velocity * 2f;
        total = total + velocity * 3f;
        total = total + velocity * 4f;
        total = total + velocity * 5f;
        total = total + velocity * 6f;
        total = total + velocity * 7f;
        total = total + velocity * 8f;
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
        total = total + height * 99f;
        total = total + height * 16f;
        total = total + height * 17f;
        total = total + height * 18f;
        Debug.Log(total);
        total = total / scale;
        return total;
    }

    public float ComputeArmor(float armor, float scale)
    {
        float total = 0f;
        total = total + armor * 31f;
        total = total + armor * 32f;
        total = total + armor * 33f;
        total = total + armor * 34f;
        total = total + armor * 35f;
        total = total + armor * 36f;
        total = total + armor * 37f;
        total = total + armor * 38f;
        total = total / scale;
        return total;
    }
}
}
